#pragma once

// Random inputs for the property tests and the acceptance suite.

#include <random>
#include <string>
#include <vector>

#include "genpatch/edit_script.hpp"
#include "genpatch/inferrer.hpp"
#include "genpatch/miner.hpp"

namespace gen {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi);  // inclusive
bool chance(Rng& rng, double p);

/// One or two functions with at most `max_stmts` statements in total,
/// nesting included.
std::string random_unit(Rng& rng, int max_stmts = 12);

/// A single rule with at most `max_elems` body elements over the same
/// vocabulary as random_unit.
std::string random_rule(Rng& rng, int max_elems = 4);

/// A valid action list: depths never jump by more than one, token fields
/// drawn from lexemes that include the serialization's own markers.
std::vector<genpatch::EditAction> random_script(Rng& rng);

/// A single-rule template and a cluster of examples instantiating it with
/// fresh identifiers, constants and surroundings.
struct ClosureCase {
  std::string template_text;
  genpatch::PatchCluster cluster;
  std::vector<genpatch::ExamplePair> examples;
};
ClosureCase closure_case(Rng& rng, int index);

}  // namespace gen
