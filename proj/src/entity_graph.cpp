#include "supmatch/entity_graph.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "supmatch/csv.hpp"
#include "supmatch/errors.hpp"
#include "supmatch/rng.hpp"

namespace supmatch {

namespace {

// Union-find with path compression and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), size_t{0});
  }

  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<size_t> parent_;
  std::vector<size_t> size_;
};

std::string pair_key(const PairAnnotation& p) {
  return p.left_id < p.right_id ? p.left_id + "\x1f" + p.right_id
                                : p.right_id + "\x1f" + p.left_id;
}

}  // namespace

int EntityLabeling::label(const std::string& offer_id) const {
  const auto it = labels.find(offer_id);
  if (it == labels.end()) throw ValidationError("offer not labeled: " + offer_id);
  return it->second;
}

std::pair<EntityLabeling, WithholdingReport> derive_entity_labels(const Corpus& corpus,
                                                                  double withhold_fraction,
                                                                  uint64_t seed) {
  if (!(withhold_fraction > 0.0) || withhold_fraction > 1.0) {
    throw ParameterError("withhold_fraction must be in (0, 1], got " +
                         std::to_string(withhold_fraction));
  }

  std::vector<PairAnnotation> eligible;
  for (const auto& p : corpus.pairs.train) {
    if (p.label == PairLabel::match) eligible.push_back(p);
  }
  for (const auto& p : corpus.pairs.valid) {
    if (p.label == PairLabel::match) eligible.push_back(p);
  }

  const size_t total = eligible.size();
  const auto used_count =
      static_cast<size_t>(std::floor(withhold_fraction * static_cast<double>(total) + 0.5));

  // Uniform subset without replacement: shuffle indices, keep the first
  // used_count, then restore corpus order within each part.
  std::vector<size_t> order(total);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<bool> used_mask(total, false);
  for (size_t i = 0; i < used_count; ++i) used_mask[order[i]] = true;

  WithholdingReport report;
  report.fraction = withhold_fraction;
  report.seed = seed;
  for (size_t i = 0; i < total; ++i) {
    (used_mask[i] ? report.used_pairs : report.withheld_pairs).push_back(eligible[i]);
  }

  // Test-split isolation, asserted on every run.
  std::set<std::string> test_keys;
  for (const auto& p : corpus.pairs.test) test_keys.insert(pair_key(p));
  for (const auto& p : report.used_pairs) {
    if (test_keys.count(pair_key(p))) {
      throw ValidationError("test pair (" + p.left_id + ", " + p.right_id +
                            ") leaked into the correspondence graph");
    }
  }

  DisjointSet components(corpus.offers.size());
  for (const auto& p : report.used_pairs) {
    components.unite(corpus.offer_index(p.left_id), corpus.offer_index(p.right_id));
  }

  EntityLabeling labeling;
  std::unordered_map<size_t, int> root_to_label;
  for (size_t i = 0; i < corpus.offers.size(); ++i) {
    const size_t root = components.find(i);
    const auto [it, inserted] = root_to_label.emplace(root, labeling.num_entities);
    if (inserted) ++labeling.num_entities;
    labeling.labels.emplace(corpus.offers[i].id, it->second);
  }
  return {std::move(labeling), std::move(report)};
}

EntityLabeling labels_from_cluster_ids(const Corpus& corpus) {
  EntityLabeling labeling;
  std::unordered_map<std::string, int> cluster_to_label;
  for (const auto& offer : corpus.offers) {
    if (!offer.cluster_id.has_value()) continue;
    const auto [it, inserted] = cluster_to_label.emplace(*offer.cluster_id, labeling.num_entities);
    if (inserted) ++labeling.num_entities;
    labeling.labels.emplace(offer.id, it->second);
  }
  return labeling;
}

std::vector<std::string> pretraining_pool(const Corpus& corpus, const EntityLabeling& labeling) {
  std::set<std::string> members;
  bool any_split_tag = false;
  for (const auto& offer : corpus.offers) {
    if (offer.split.has_value()) {
      any_split_tag = true;
      break;
    }
  }
  if (any_split_tag) {
    for (const auto& offer : corpus.offers) {
      if (offer.split && (*offer.split == "train" || *offer.split == "valid")) {
        members.insert(offer.id);
      }
    }
  } else {
    auto add_pairs = [&](const std::vector<PairAnnotation>& pairs) {
      for (const auto& p : pairs) {
        members.insert(p.left_id);
        members.insert(p.right_id);
      }
    };
    add_pairs(corpus.pairs.train);
    add_pairs(corpus.pairs.valid);
  }

  std::vector<std::string> pool;
  pool.reserve(members.size());
  for (const auto& offer : corpus.offers) {
    if (!members.count(offer.id)) continue;
    if (!labeling.has(offer.id)) {
      throw ValidationError("pooled offer missing entity label: " + offer.id);
    }
    pool.push_back(offer.id);
  }
  return pool;
}

void save_labels_csv(const Corpus& corpus, const EntityLabeling& labeling,
                     const std::filesystem::path& path) {
  csv::Table table;
  table.header = {"offer_id", "label"};
  for (const auto& offer : corpus.offers) {
    const auto it = labeling.labels.find(offer.id);
    if (it == labeling.labels.end()) continue;
    table.rows.push_back({offer.id, std::to_string(it->second)});
  }
  csv::write_file(path, table);
}

EntityLabeling load_labels_csv(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const int id_col = table.column("offer_id");
  const int label_col = table.column("label");
  if (id_col < 0 || label_col < 0) {
    throw IngestionError(path.string() + ": expected columns offer_id, label");
  }
  EntityLabeling labeling;
  int max_label = -1;
  for (const auto& row : table.rows) {
    const int label = std::stoi(row[label_col]);
    if (label < 0) throw ValidationError(path.string() + ": negative label");
    labeling.labels.emplace(row[id_col], label);
    max_label = std::max(max_label, label);
  }
  labeling.num_entities = max_label + 1;
  return labeling;
}

void save_withholding_json(const WithholdingReport& report, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["fraction"] = report.fraction;
  doc["seed"] = report.seed;
  auto pairs_json = [](const std::vector<PairAnnotation>& pairs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pairs) arr.push_back(nlohmann::json::array({p.left_id, p.right_id}));
    return arr;
  };
  doc["used_pairs"] = pairs_json(report.used_pairs);
  doc["withheld_pairs"] = pairs_json(report.withheld_pairs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace supmatch
