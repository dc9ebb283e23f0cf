#pragma once

// Random shopping trials built from the checkpoint line fixtures. Each trial
// records what it did, which is the ground truth the scorer must recover.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace websuite::testing {

struct SyntheticTrial {
  std::vector<std::string> lines;
  std::vector<bool> reached;
  std::vector<bool> completed;
  bool verified = false;
};

/// Lines no golden of either shopping task accepts.
inline const std::vector<std::string>& distractor_lines() {
  static const std::vector<std::string> lines{
      "click/button // Compare", "select/checkbox // Newsletter=checked",
      "type/text // Coupon=SAVE10", "click/iconbutton // Favorite"};
  return lines;
}

/// Walks the checkpoints in order. Each one is either finished (all work in a
/// random order, then its exit) or abandoned (part of the work, or all of it
/// without the exit), which ends the trial.
inline SyntheticTrial synthesize_trial(std::mt19937_64& rng,
                                       const std::vector<CheckpointLines>& cps) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  SyntheticTrial t;
  t.reached.assign(cps.size(), false);
  t.completed.assign(cps.size(), false);
  for (std::size_t k = 0; k < cps.size(); ++k) {
    t.reached[k] = true;
    auto work = cps[k].work;
    std::shuffle(work.begin(), work.end(), rng);
    bool finish = pick(0, 3) != 0;
    bool keep_exit = finish;
    if (!finish && pick(0, 1) == 0) {
      work.resize(static_cast<std::size_t>(pick(0, int(work.size()) - 1)));
    }
    for (int n = pick(0, 2); n > 0; --n) {
      const auto& d = distractor_lines();
      auto at = static_cast<std::size_t>(pick(0, int(work.size())));
      work.insert(work.begin() + at, d[pick(0, int(d.size()) - 1)]);
    }
    t.lines.insert(t.lines.end(), work.begin(), work.end());
    if (!keep_exit) return t;
    t.lines.push_back(cps[k].exit);
    t.completed[k] = true;
  }
  t.verified = true;
  return t;
}

}  // namespace websuite::testing
