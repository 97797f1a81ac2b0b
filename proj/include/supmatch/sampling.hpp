#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "supmatch/entity_graph.hpp"
#include "supmatch/records.hpp"
#include "supmatch/rng.hpp"

namespace supmatch {

/// Per-source batch-assembly pool: all pooled offers of the anchor source
/// plus every pooled offer from other sources sharing an entity label with
/// some offer of that source.
struct SamplingDataset {
  std::string source;                // "*" for the pooled baseline
  std::vector<std::string> members;  // pool order
  std::vector<int> member_labels;    // parallel to members
  std::map<int, std::vector<std::string>> label_index;  // label -> member ids

  bool empty() const { return members.empty(); }
};

/// 2N entries; the first n are anchors, entry n+i is the positive drawn for
/// anchor i. Every item comes from one sampling dataset.
struct ContrastiveBatch {
  std::string origin;  // source of the dataset sampled from
  std::vector<std::pair<std::string, int>> items;  // (offer id, entity label)
  size_t n = 0;
};

/// One dataset per source appearing in the pool, per the source-aware rule.
std::vector<SamplingDataset> build_sampling_datasets(const std::vector<std::string>& pool,
                                                     const EntityLabeling& labeling,
                                                     const Corpus& corpus);

/// Single dataset over the whole pool (source "*"); the label-noisy baseline.
SamplingDataset build_pooled_dataset(const std::vector<std::string>& pool,
                                     const EntityLabeling& labeling, const Corpus& corpus);

/// Draw order: one bounded draw choosing the dataset uniformly; then n
/// anchor draws (partial Fisher-Yates without replacement when the dataset
/// has >= n members, with replacement otherwise); then one positive draw
/// per anchor, uniform over the anchor label's members including the anchor
/// itself. The batch invariants are checked before returning.
ContrastiveBatch sample_batch(const std::vector<SamplingDataset>& datasets, size_t n, Rng& rng);

void save_sampling_datasets_json(const std::vector<SamplingDataset>& datasets,
                                 const std::filesystem::path& path);

}  // namespace supmatch
