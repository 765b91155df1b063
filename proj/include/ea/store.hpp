#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ea/prov.hpp"

namespace ea::service {

/// File-backed store of raw bindings CSVs keyed by (app, decision), with a
/// cached expansion per decision. Writes go through a temp file plus rename,
/// so readers observe either the previous version or the complete new one.
/// Writes to one decision are serialized; reads of distinct decisions never
/// contend, and expansion happens outside any lock.
class DecisionStore {
public:
    explicit DecisionStore(std::filesystem::path root);

    struct PutResult {
        bool created = false;
    };

    /// Stores a bindings CSV atomically and invalidates the cached expansion.
    PutResult put(const std::string& app, const std::string& decision,
                  const std::string& csv);

    /// Raw CSV, from memory or disk. Empty when the decision is unknown.
    std::optional<std::string> get_csv(const std::string& app,
                                       const std::string& decision);

    /// The expanded provenance, computing it via `expand` on first read after
    /// a write. Throws NotFound for unknown decisions.
    std::shared_ptr<const ProvDocument>
    expanded(const std::string& app, const std::string& decision,
             const std::function<ProvDocument(const std::string&)>& expand);

    /// Decision and app ids are restricted to [A-Za-z0-9._-]+ so they map
    /// onto file names.
    static bool valid_key(const std::string& key);

private:
    struct Entry {
        std::mutex mutex;
        std::uint64_t version = 0;
        bool loaded = false; // csv reflects the file (or its absence)
        std::optional<std::string> csv;
        std::shared_ptr<const ProvDocument> document;
    };

    std::shared_ptr<Entry> entry_for(const std::string& app,
                                     const std::string& decision);
    std::filesystem::path file_for(const std::string& app,
                                   const std::string& decision) const;
    static void load_locked(Entry& entry, const std::filesystem::path& file);

    std::filesystem::path root_;
    std::mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> entries_;
};

} // namespace ea::service
