#pragma once

// Generic patch inference from clusters of before/after examples.

#include <optional>
#include <string>
#include <vector>

#include "genpatch/miner.hpp"
#include "genpatch/pattern.hpp"

namespace genpatch {

struct ExamplePair {
  std::string hunk_id;
  std::string path;
  std::string before;  // fragment text
  std::string after;
  DiffHunk expected;   // before -> after
  Provenance provenance;
};

ExamplePair example_from(const KeyedHunk& h);

struct Generalization {
  std::string text;                   // template with metavariables substituted
  std::vector<MetavarDecl> metavars;  // in order of first use
};

/// Least-general anti-unification of statements or expressions given as
/// source text. Differing callees never generalize. Throws
/// Error("no-generalization") when the terms cannot share one template.
Generalization generalize_terms(const std::vector<std::string>& terms);

struct Score {
  double recall = 0.0;
  double precision = 0.0;
  int expected = 0;  // changed lines expected
  int produced = 0;
  int matched = 0;
};

/// Line-level recall and precision of `gp` over `examples`, after whitespace
/// normalization. Lines are compared as multisets.
Score score(const GenericPatch& gp, const std::vector<ExamplePair>& examples);

struct InferenceResult {
  std::vector<GenericPatch> patches;   // one multi-rule patch, or none
  std::vector<std::string> uncovered;  // hunk ids
  double elapsed = 0.0;
  bool timed_out = false;
};

struct InferOptions {
  double timeout_seconds = 900;
};

InferenceResult infer(const PatchCluster& cluster, const std::vector<ExamplePair>& examples,
                      const InferOptions& options = {});

/// Distinct hunks, functions, files, patches and projects among `prov`.
Frequency frequency_of(const std::vector<Provenance>& prov);

/// One patch per rule; ids get a "-<index>" suffix.
std::vector<GenericPatch> split_atomic(const GenericPatch& gp);

}  // namespace genpatch
