#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "supmatch/records.hpp"

namespace supmatch {

/// Entity labels for contrastive pre-training. Two offers share a label iff
/// they are connected by a path of used match pairs (or share a cluster_id).
struct EntityLabeling {
  std::unordered_map<std::string, int> labels;  // offer id -> dense label
  int num_entities = 0;

  bool has(const std::string& offer_id) const { return labels.count(offer_id) > 0; }
  int label(const std::string& offer_id) const;
};

struct WithholdingReport {
  double fraction = 1.0;
  uint64_t seed = 0;
  std::vector<PairAnnotation> used_pairs;      // corpus order (train, then valid)
  std::vector<PairAnnotation> withheld_pairs;  // corpus order
};

/// Connected components over the correspondence graph built from the used
/// match pairs. Eligible edges are the positive pairs of the train and
/// validation splits; test pairs never touch the graph. |used| =
/// round-half-up(fraction * eligible); the withheld subset is drawn
/// uniformly without replacement under the seed. Every corpus offer gets a
/// label; offers untouched by any used pair get singleton labels. Labels
/// are dense and assigned by first occurrence in corpus offer order.
std::pair<EntityLabeling, WithholdingReport> derive_entity_labels(const Corpus& corpus,
                                                                  double withhold_fraction,
                                                                  uint64_t seed);

/// Dense re-indexing of explicit cluster ids (first occurrence in corpus
/// order). Offers without a cluster_id are left unlabeled; coverage of the
/// pre-training pool is enforced by pretraining_pool.
EntityLabeling labels_from_cluster_ids(const Corpus& corpus);

/// Deduplicated ids of all offers appearing in train or validation pairs;
/// if any offer carries a split tag, the tagged train/valid offers are used
/// instead. Order follows corpus offer order. Throws if a pooled offer is
/// missing from the labeling, naming the offer.
std::vector<std::string> pretraining_pool(const Corpus& corpus, const EntityLabeling& labeling);

/// Two-column CSV (offer_id,label) in corpus offer order.
void save_labels_csv(const Corpus& corpus, const EntityLabeling& labeling,
                     const std::filesystem::path& path);
EntityLabeling load_labels_csv(const std::filesystem::path& path);

void save_withholding_json(const WithholdingReport& report, const std::filesystem::path& path);

}  // namespace supmatch
