#include "supmatch/sampling.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "supmatch/errors.hpp"

namespace supmatch {

namespace {

void index_labels(SamplingDataset& dataset, const EntityLabeling& labeling) {
  dataset.member_labels.reserve(dataset.members.size());
  for (const auto& id : dataset.members) {
    const int label = labeling.label(id);
    dataset.member_labels.push_back(label);
    dataset.label_index[label].push_back(id);
  }
}

void validate_batch(const ContrastiveBatch& batch) {
  if (batch.items.size() != 2 * batch.n) {
    throw ValidationError("contrastive batch must hold 2N items");
  }
  for (size_t i = 0; i < batch.n; ++i) {
    const int label = batch.items[i].second;
    bool companion = false;
    for (size_t j = 0; j < batch.items.size() && !companion; ++j) {
      if (j != i && batch.items[j].second == label) companion = true;
    }
    if (!companion) {
      throw ValidationError("anchor " + batch.items[i].first + " has no same-label companion");
    }
  }
}

}  // namespace

std::vector<SamplingDataset> build_sampling_datasets(const std::vector<std::string>& pool,
                                                     const EntityLabeling& labeling,
                                                     const Corpus& corpus) {
  if (pool.empty()) throw ParameterError("pre-training pool is empty");

  // Sources in order of first appearance in the pool.
  std::vector<std::string> sources;
  std::unordered_set<std::string> seen;
  for (const auto& id : pool) {
    const auto& src = corpus.offer(id).source;
    if (seen.insert(src).second) sources.push_back(src);
  }

  std::vector<SamplingDataset> datasets;
  datasets.reserve(sources.size());
  for (const auto& src : sources) {
    std::set<int> own_labels;
    for (const auto& id : pool) {
      if (corpus.offer(id).source == src) own_labels.insert(labeling.label(id));
    }
    SamplingDataset dataset;
    dataset.source = src;
    for (const auto& id : pool) {
      const bool same_source = corpus.offer(id).source == src;
      if (same_source || own_labels.count(labeling.label(id))) dataset.members.push_back(id);
    }
    index_labels(dataset, labeling);
    datasets.push_back(std::move(dataset));
  }
  return datasets;
}

SamplingDataset build_pooled_dataset(const std::vector<std::string>& pool,
                                     const EntityLabeling& labeling, const Corpus& corpus) {
  (void)corpus;
  if (pool.empty()) throw ParameterError("pre-training pool is empty");
  SamplingDataset dataset;
  dataset.source = "*";
  dataset.members = pool;
  index_labels(dataset, labeling);
  return dataset;
}

ContrastiveBatch sample_batch(const std::vector<SamplingDataset>& datasets, size_t n, Rng& rng) {
  if (n < 1) throw ParameterError("batch half-size N must be >= 1");
  bool any_nonempty = false;
  for (const auto& d : datasets) any_nonempty |= !d.empty();
  if (datasets.empty() || !any_nonempty) throw ParameterError("no nonempty sampling dataset");

  const size_t pick = rng.bounded(datasets.size());
  const SamplingDataset& dataset = datasets[pick];
  if (dataset.empty()) throw ParameterError("chosen sampling dataset is empty");

  const size_t m = dataset.members.size();
  std::vector<size_t> anchors;
  anchors.reserve(n);
  if (m >= n) {
    // Partial Fisher-Yates: first n positions of a shuffle, one draw each.
    std::vector<size_t> idx(m);
    std::iota(idx.begin(), idx.end(), size_t{0});
    for (size_t i = 0; i < n; ++i) {
      const size_t j = i + static_cast<size_t>(rng.bounded(m - i));
      std::swap(idx[i], idx[j]);
      anchors.push_back(idx[i]);
    }
  } else {
    for (size_t i = 0; i < n; ++i) anchors.push_back(rng.bounded(m));
  }

  ContrastiveBatch batch;
  batch.origin = dataset.source;
  batch.n = n;
  batch.items.reserve(2 * n);
  for (const size_t a : anchors) {
    batch.items.emplace_back(dataset.members[a], dataset.member_labels[a]);
  }
  for (size_t i = 0; i < n; ++i) {
    const int label = batch.items[i].second;
    const auto& candidates = dataset.label_index.at(label);
    batch.items.emplace_back(candidates[rng.bounded(candidates.size())], label);
  }

  validate_batch(batch);
  return batch;
}

void save_sampling_datasets_json(const std::vector<SamplingDataset>& datasets,
                                 const std::filesystem::path& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : datasets) {
    nlohmann::json entry;
    entry["source"] = d.source;
    entry["members"] = d.members;
    nlohmann::json index = nlohmann::json::object();
    for (const auto& [label, ids] : d.label_index) index[std::to_string(label)] = ids;
    entry["label_index"] = index;
    arr.push_back(std::move(entry));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot open for writing: " + path.string());
  out << arr.dump(2) << '\n';
}

}  // namespace supmatch
