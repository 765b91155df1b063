#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ea/error.hpp"

namespace ea {

/// Well-known namespace IRIs.
namespace wellknown {
inline constexpr std::string_view kProv = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
/// Reserved namespace for template variables (the `var:` prefix).
inline constexpr std::string_view kVar = "http://openprovenance.org/var#";
/// Extension terms used by the query language (WasDerivedFromStar).
inline constexpr std::string_view kProvExt =
    "http://openprovenance.org/ns/provext#";
} // namespace wellknown

/// A namespaced identifier kept in both compact (prefix:local) and expanded
/// (IRI) form. Equality and ordering are by expanded IRI only; the prefix is
/// notation, not identity.
struct QualifiedName {
    std::string prefix;
    std::string local;
    std::string iri;

    std::string compact() const { return prefix + ":" + local; }

    bool in_namespace(std::string_view ns_iri) const {
        return iri.size() == ns_iri.size() + local.size() &&
               iri.compare(0, ns_iri.size(), ns_iri) == 0 &&
               iri.compare(ns_iri.size(), local.size(), local) == 0;
    }

    bool empty() const { return iri.empty(); }

    friend bool operator==(const QualifiedName& a, const QualifiedName& b) {
        return a.iri == b.iri;
    }
    friend std::strong_ordering operator<=>(const QualifiedName& a,
                                            const QualifiedName& b) {
        return a.iri <=> b.iri;
    }
};

/// Synthetic identifier for a relation without one in its source (`_:rN`).
inline QualifiedName make_synthetic_id(int n) {
    std::string local = "r" + std::to_string(n);
    return QualifiedName{"_", local, "_:" + local};
}

/// Prefix -> IRI table. Declaration order is preserved for serialization.
/// `prov` and `xsd` are built in and resolvable without declaration.
class NamespaceTable {
public:
    static const std::map<std::string, std::string>& builtins();

    /// Declares a prefix. Redeclaring with the same IRI is a no-op;
    /// redeclaring with a different IRI is an error.
    void declare(const std::string& prefix, const std::string& iri);

    /// Declared or builtin IRI for a prefix, or nullptr.
    const std::string* find(const std::string& prefix) const;

    bool declares(const std::string& prefix) const {
        return by_prefix_.count(prefix) != 0;
    }

    /// Expands prefix:local. Throws a Data error on undeclared prefixes.
    QualifiedName resolve(const std::string& prefix,
                          const std::string& local) const;

    /// Declarations in insertion order (builtins excluded).
    const std::vector<std::pair<std::string, std::string>>& declarations()
        const {
        return decls_;
    }

    /// Union with another table. Conflicting bindings are an error.
    void merge(const NamespaceTable& other);

private:
    std::vector<std::pair<std::string, std::string>> decls_;
    std::map<std::string, std::string> by_prefix_;
};

} // namespace ea
