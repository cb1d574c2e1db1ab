#pragma once

#include "tdlc/certificate.hpp"
#include "tdlc/finite/finite_group.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tdlc::props {

/* One catalog case that broke a property, with enough data to replay it. */
struct Counterexample {
    std::string group;
    std::vector<finite::Elt> endo_map;
    std::vector<finite::Elt> subgroup;  // empty when the case is per-endo
    std::string detail;
};

struct PropertyReport {
    std::string name;
    long long cases = 0;
    long long failures = 0;
    std::vector<Counterexample> counterexamples;  // capped at a handful
    bool pass() const { return failures == 0 && cases > 0; }
};

struct PropertyOptions {
    int max_order = 12;        // catalog cutoff for the sweep
    Horizon horizon;
    std::size_t endo_cap = 100000;
    std::uint64_t seed = 0;
};

/* Registered structural properties of the engine, each an exhaustive sweep
   over the finite catalog.  Names are stable: they are the arguments of the
   command-line `check` command. */
using PropertyFn = std::function<PropertyReport(const PropertyOptions&)>;

const std::vector<std::pair<std::string, PropertyFn>>& property_registry();
std::vector<std::string> property_names();
bool has_property(const std::string& name);
PropertyReport run_property(const std::string& name, const PropertyOptions& opt);

}  // namespace tdlc::props
