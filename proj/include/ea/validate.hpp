#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ea/bundle.hpp"

namespace ea::tools {

/// Validator output. Zero errors if and only if the bundle loads in the
/// service; V1/V4 sample-data checks only ever warn.
struct ValidationReport {
    std::vector<service::Finding> findings;

    int errors() const;
    int warnings() const;
    bool ok() const { return errors() == 0; }
};

/// Runs the loader checks (V2, V3, V5, B*) plus, when sample bindings are
/// given, V1 (every statement of the expanded trace is connected to a
/// decision-typed entity) and V4 (the sample covers every template
/// variable).
ValidationReport validate_bundle(const std::filesystem::path& dir,
                                 const std::optional<std::string>& sample_csv);

std::string format_report(const ValidationReport& report);
std::string report_to_json(const ValidationReport& report);

} // namespace ea::tools
