#pragma once

#include <string>

#include "ea/bundle.hpp"

namespace ea::tools {

/// Bundle cost metrics: artifact counts and their complexity measures.
struct StatsReport {
    int templates = 0;
    int template_statements = 0; // provenance records across all templates
    int queries = 0;
    int query_joins = 0;
    int query_filters = 0;
    int plans = 0;
    int plan_nodes = 0;       // syntax-tree nodes across all plans
    int dictionary_terms = 0; // section entries plus per-profile entries
    int profiles = 0;
    int sentences = 0; // plans-as-sentences across the manifest
};

StatsReport compute_stats(const service::Bundle& bundle);

std::string format_table(const StatsReport& report);
std::string stats_to_json(const StatsReport& report);

} // namespace ea::tools
