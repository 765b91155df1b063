#include "ea/qualified_name.hpp"

namespace ea {

const std::map<std::string, std::string>& NamespaceTable::builtins() {
    static const std::map<std::string, std::string> table = {
        {"prov", std::string(wellknown::kProv)},
        {"xsd", std::string(wellknown::kXsd)},
    };
    return table;
}

void NamespaceTable::declare(const std::string& prefix,
                             const std::string& iri) {
    auto it = by_prefix_.find(prefix);
    if (it != by_prefix_.end()) {
        if (it->second != iri)
            throw_data("prefix '" + prefix + "' is already bound to <" +
                       it->second + ">, cannot rebind to <" + iri + ">");
        return;
    }
    by_prefix_.emplace(prefix, iri);
    decls_.emplace_back(prefix, iri);
}

const std::string* NamespaceTable::find(const std::string& prefix) const {
    auto it = by_prefix_.find(prefix);
    if (it != by_prefix_.end())
        return &it->second;
    auto bit = builtins().find(prefix);
    if (bit != builtins().end())
        return &bit->second;
    return nullptr;
}

QualifiedName NamespaceTable::resolve(const std::string& prefix,
                                      const std::string& local) const {
    const std::string* iri = find(prefix);
    if (!iri)
        throw_data("undeclared prefix '" + prefix + "'");
    return QualifiedName{prefix, local, *iri + local};
}

void NamespaceTable::merge(const NamespaceTable& other) {
    for (const auto& [prefix, iri] : other.decls_)
        declare(prefix, iri);
}

} // namespace ea
