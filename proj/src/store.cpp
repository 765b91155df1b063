#include "ea/store.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ea::service {

namespace fs = std::filesystem;

DecisionStore::DecisionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

bool DecisionStore::valid_key(const std::string& key) {
    if (key.empty() || key.size() > 128)
        return false;
    for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' &&
            c != '_' && c != '-')
            return false;
    return key != "." && key != "..";
}

std::shared_ptr<DecisionStore::Entry>
DecisionStore::entry_for(const std::string& app, const std::string& decision) {
    std::lock_guard<std::mutex> lock(map_mutex_);
    auto& entry = entries_[app + "/" + decision];
    if (!entry)
        entry = std::make_shared<Entry>();
    return entry;
}

fs::path DecisionStore::file_for(const std::string& app,
                                 const std::string& decision) const {
    return root_ / app / (decision + ".csv");
}

void DecisionStore::load_locked(Entry& entry, const fs::path& file) {
    if (entry.loaded)
        return;
    std::ifstream in(file, std::ios::binary);
    if (in) {
        std::ostringstream body;
        body << in.rdbuf();
        entry.csv = body.str();
    }
    entry.loaded = true;
}

DecisionStore::PutResult DecisionStore::put(const std::string& app,
                                            const std::string& decision,
                                            const std::string& csv) {
    if (!valid_key(app) || !valid_key(decision))
        throw_data("app and decision ids must match [A-Za-z0-9._-]+");
    auto entry = entry_for(app, decision);
    fs::path file = file_for(app, decision);

    std::lock_guard<std::mutex> lock(entry->mutex);
    load_locked(*entry, file);
    bool created = !entry->csv.has_value();

    fs::create_directories(file.parent_path());
    fs::path temp = file;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw_config("cannot write to store at " + temp.string());
        out << csv;
    }
    fs::rename(temp, file);

    entry->csv = csv;
    entry->document.reset();
    ++entry->version;
    return PutResult{created};
}

std::optional<std::string>
DecisionStore::get_csv(const std::string& app, const std::string& decision) {
    if (!valid_key(app) || !valid_key(decision))
        return std::nullopt;
    auto entry = entry_for(app, decision);
    std::lock_guard<std::mutex> lock(entry->mutex);
    load_locked(*entry, file_for(app, decision));
    return entry->csv;
}

std::shared_ptr<const ProvDocument> DecisionStore::expanded(
    const std::string& app, const std::string& decision,
    const std::function<ProvDocument(const std::string&)>& expand) {
    if (!valid_key(app) || !valid_key(decision))
        throw_not_found("unknown decision '" + decision + "'");
    auto entry = entry_for(app, decision);

    std::string csv;
    std::uint64_t version;
    {
        std::lock_guard<std::mutex> lock(entry->mutex);
        load_locked(*entry, file_for(app, decision));
        if (!entry->csv)
            throw_not_found("no bindings recorded for decision '" + decision +
                            "'");
        if (entry->document)
            return entry->document;
        csv = *entry->csv;
        version = entry->version;
    }

    // Expansion is pure; run it unlocked so readers of other versions and
    // decisions proceed.
    auto document = std::make_shared<const ProvDocument>(expand(csv));

    std::lock_guard<std::mutex> lock(entry->mutex);
    if (entry->version == version && !entry->document)
        entry->document = document;
    return entry->document ? entry->document : document;
}

} // namespace ea::service
