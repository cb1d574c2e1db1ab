#pragma once

#include "tdlc/certificate.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace tdlc::fixtures {

/* Worked examples and derived oracle values, embedded at build time from
   data/fixtures/.  Each fixture document is a case file (see io/descriptors)
   extended with "name", "source", "note" and an "expected" list; every
   expected entry is {"op", "args", "expect", "source", "note"?} where
   "source" records where the value comes from:
     literature  : printed in the source text backing this library
     oracle      : recomputed by the dense-window / exhaustive test oracles
     definition  : immediate from the definitions (smoke values)
   run_fixture executes each entry through the engine and compares canonical
   forms; a mismatch report carries both values. */

struct FixtureInfo {
    std::string name;
    std::string file;
    std::string universe;  // "finite" | "laurent"
    std::string source;
    std::string note;
};

const std::vector<FixtureInfo>& registry();
std::vector<std::string> fixture_names();
bool has_fixture(const std::string& name);

/* Parsed fixture document; throws InputError for unknown names. */
const nlohmann::json& fixture_doc(const std::string& name);

struct CheckOutcome {
    std::string op;
    std::string detail;  // the arguments that were run, rendered compactly
    bool ok = false;
    std::string message;  // on failure: expected vs computed
};

struct FixtureReport {
    std::string name;
    std::vector<CheckOutcome> checks;
    bool pass() const;
};

FixtureReport run_fixture(const std::string& name, const Horizon& h = {});

}  // namespace tdlc::fixtures
