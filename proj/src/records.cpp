#include "supmatch/records.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "supmatch/csv.hpp"
#include "supmatch/errors.hpp"

namespace supmatch {

namespace {

using nlohmann::json;

std::string pair_key(const std::string& a, const std::string& b) {
  return a < b ? a + "\x1f" + b : b + "\x1f" + a;
}

PairLabel parse_label(const std::string& raw, const std::string& origin, size_t row) {
  if (raw == "0") return PairLabel::non_match;
  if (raw == "1") return PairLabel::match;
  throw ValidationError(origin + ": row " + std::to_string(row + 2) +
                        ": label must be 0 or 1, got '" + raw + "'");
}

std::vector<PairAnnotation> read_pair_file(const std::filesystem::path& path,
                                           const std::string& left_ns,
                                           const std::string& right_ns) {
  const csv::Table table = csv::read_file(path);
  const int lcol = table.column("ltable_id");
  const int rcol = table.column("rtable_id");
  const int labcol = table.column("label");
  if (lcol < 0 || rcol < 0 || labcol < 0) {
    throw IngestionError(path.string() + ": expected columns ltable_id, rtable_id, label");
  }
  std::vector<PairAnnotation> pairs;
  pairs.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    PairAnnotation p;
    p.left_id = left_ns.empty() ? row[lcol] : left_ns + ":" + row[lcol];
    p.right_id = right_ns.empty() ? row[rcol] : right_ns + ":" + row[rcol];
    p.label = parse_label(row[labcol], path.string(), r);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

/// Collapse whitespace runs to single spaces and trim the ends.
std::string normalize_ws(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  bool pending_space = false;
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void Corpus::finalize() {
  index_.clear();
  index_.reserve(offers.size());
  for (size_t i = 0; i < offers.size(); ++i) {
    const auto [it, inserted] = index_.emplace(offers[i].id, i);
    if (!inserted) throw ValidationError("duplicate offer id: " + offers[i].id);
    if (offers[i].attributes.size() != schema.size()) {
      throw ValidationError("offer " + offers[i].id + " has " +
                            std::to_string(offers[i].attributes.size()) +
                            " attribute slots, schema has " + std::to_string(schema.size()));
    }
  }

  auto check_split = [&](const std::vector<PairAnnotation>& split, const char* name) {
    std::vector<std::string> bad;
    for (size_t r = 0; r < split.size(); ++r) {
      const auto& p = split[r];
      if (!contains(p.left_id) || !contains(p.right_id)) {
        bad.push_back(name + std::string(" row ") + std::to_string(r + 1) + " (" + p.left_id +
                      ", " + p.right_id + ")");
      } else if (p.left_id == p.right_id) {
        throw ValidationError(std::string(name) + " row " + std::to_string(r + 1) +
                              ": pair references the same offer twice: " + p.left_id);
      }
    }
    if (!bad.empty()) {
      std::string msg = "dangling pair ids:";
      for (const auto& b : bad) msg += "\n  " + b;
      throw ValidationError(msg);
    }
  };
  check_split(pairs.train, "train");
  check_split(pairs.valid, "valid");
  check_split(pairs.test, "test");

  std::set<std::string> seen;
  auto check_disjoint = [&](const std::vector<PairAnnotation>& split, const char* name) {
    for (const auto& p : split) {
      if (!seen.insert(pair_key(p.left_id, p.right_id)).second) {
        throw ValidationError(std::string("pair (") + p.left_id + ", " + p.right_id +
                              ") appears in more than one split (found again in " + name + ")");
      }
    }
  };
  check_disjoint(pairs.train, "train");
  check_disjoint(pairs.valid, "valid");
  check_disjoint(pairs.test, "test");
}

const Offer& Corpus::offer(const std::string& offer_id) const {
  return offers[offer_index(offer_id)];
}

size_t Corpus::offer_index(const std::string& offer_id) const {
  const auto it = index_.find(offer_id);
  if (it == index_.end()) throw ValidationError("unknown offer id: " + offer_id);
  return it->second;
}

Corpus load_two_table_corpus(const std::filesystem::path& dir) {
  const auto table_a = csv::read_file(dir / "tableA.csv");
  const auto table_b = csv::read_file(dir / "tableB.csv");
  if (table_a.header.empty() || table_b.header.empty()) {
    throw IngestionError(dir.string() + ": tables need at least an id column");
  }

  Corpus corpus;
  // Schema is the union of the non-id columns, tableA order first.
  corpus.schema.assign(table_a.header.begin() + 1, table_a.header.end());
  for (size_t c = 1; c < table_b.header.size(); ++c) {
    if (std::find(corpus.schema.begin(), corpus.schema.end(), table_b.header[c]) ==
        corpus.schema.end()) {
      corpus.schema.push_back(table_b.header[c]);
    }
  }

  auto ingest_table = [&](const csv::Table& table, const std::string& ns,
                          const std::string& origin) {
    std::vector<int> attr_col(corpus.schema.size(), -1);
    for (size_t s = 0; s < corpus.schema.size(); ++s) {
      for (size_t c = 1; c < table.header.size(); ++c) {
        if (table.header[c] == corpus.schema[s]) attr_col[s] = static_cast<int>(c);
      }
    }
    std::set<std::string> seen_ids;
    for (size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (!seen_ids.insert(row[0]).second) {
        throw ValidationError(origin + ": duplicate id '" + row[0] + "' at row " +
                              std::to_string(r + 2));
      }
      Offer offer;
      offer.id = ns + ":" + row[0];
      offer.source = ns;
      offer.attributes.resize(corpus.schema.size());
      for (size_t s = 0; s < corpus.schema.size(); ++s) {
        if (attr_col[s] >= 0 && !row[attr_col[s]].empty()) offer.attributes[s] = row[attr_col[s]];
      }
      corpus.offers.push_back(std::move(offer));
    }
  };
  ingest_table(table_a, "A", (dir / "tableA.csv").string());
  ingest_table(table_b, "B", (dir / "tableB.csv").string());

  corpus.pairs.train = read_pair_file(dir / "train.csv", "A", "B");
  corpus.pairs.valid = read_pair_file(dir / "valid.csv", "A", "B");
  corpus.pairs.test = read_pair_file(dir / "test.csv", "A", "B");

  corpus.finalize();
  return corpus;
}

Corpus load_multi_source_corpus(const std::filesystem::path& offers_path,
                                const std::filesystem::path& pairs_dir) {
  const auto table = csv::read_file(offers_path);
  const int id_col = table.column("id");
  const int source_col = table.column("source");
  const int cluster_col = table.column("cluster_id");
  const int split_col = table.column("split");
  if (id_col < 0) throw IngestionError(offers_path.string() + ": missing 'id' column");
  if (source_col < 0) throw IngestionError(offers_path.string() + ": missing 'source' column");

  Corpus corpus;
  std::vector<int> attr_cols;
  for (size_t c = 0; c < table.header.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (ci == id_col || ci == source_col || ci == cluster_col || ci == split_col) continue;
    corpus.schema.push_back(table.header[c]);
    attr_cols.push_back(ci);
  }

  std::unordered_map<std::string, std::string> raw_to_full;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[source_col].empty()) {
      throw ValidationError(offers_path.string() + ": row " + std::to_string(r + 2) +
                            ": empty source");
    }
    Offer offer;
    offer.source = row[source_col];
    offer.id = offer.source + ":" + row[id_col];
    if (!raw_to_full.emplace(row[id_col], offer.id).second) {
      throw ValidationError(offers_path.string() + ": duplicate id '" + row[id_col] + "'");
    }
    if (cluster_col >= 0 && !row[cluster_col].empty()) offer.cluster_id = row[cluster_col];
    if (split_col >= 0 && !row[split_col].empty()) {
      const std::string& s = row[split_col];
      if (s != "train" && s != "valid" && s != "test") {
        throw ValidationError(offers_path.string() + ": row " + std::to_string(r + 2) +
                              ": split must be train/valid/test, got '" + s + "'");
      }
      offer.split = s;
    }
    offer.attributes.resize(corpus.schema.size());
    for (size_t s = 0; s < corpus.schema.size(); ++s) {
      if (!row[attr_cols[s]].empty()) offer.attributes[s] = row[attr_cols[s]];
    }
    corpus.offers.push_back(std::move(offer));
  }

  auto read_by_raw_id = [&](const std::filesystem::path& path) {
    auto pairs = read_pair_file(path, "", "");
    std::vector<std::string> bad;
    for (size_t r = 0; r < pairs.size(); ++r) {
      auto& p = pairs[r];
      const auto l = raw_to_full.find(p.left_id);
      const auto rt = raw_to_full.find(p.right_id);
      if (l == raw_to_full.end() || rt == raw_to_full.end()) {
        bad.push_back(path.filename().string() + " row " + std::to_string(r + 1) + " (" +
                      p.left_id + ", " + p.right_id + ")");
        continue;
      }
      p.left_id = l->second;
      p.right_id = rt->second;
    }
    if (!bad.empty()) {
      std::string msg = "dangling pair ids:";
      for (const auto& b : bad) msg += "\n  " + b;
      throw ValidationError(msg);
    }
    return pairs;
  };
  corpus.pairs.train = read_by_raw_id(pairs_dir / "train.csv");
  corpus.pairs.valid = read_by_raw_id(pairs_dir / "valid.csv");
  corpus.pairs.test = read_by_raw_id(pairs_dir / "test.csv");

  corpus.finalize();
  return corpus;
}

std::string serialize_offer(const std::vector<std::string>& schema, const Offer& offer) {
  std::string out;
  for (size_t s = 0; s < schema.size() && s < offer.attributes.size(); ++s) {
    if (!offer.attributes[s].has_value()) continue;
    const std::string value = normalize_ws(*offer.attributes[s]);
    if (value.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += "[COL] ";
    out += normalize_ws(schema[s]);
    out += " [VAL] ";
    out += value;
  }
  return out;
}

std::string serialize_offer(const Corpus& corpus, const Offer& offer) {
  return serialize_offer(corpus.schema, offer);
}

namespace {

json pairs_to_json(const std::vector<PairAnnotation>& pairs) {
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back(json::array({p.left_id, p.right_id, static_cast<int>(p.label)}));
  }
  return arr;
}

std::vector<PairAnnotation> pairs_from_json(const json& arr, const std::string& where) {
  std::vector<PairAnnotation> pairs;
  if (!arr.is_array()) throw IngestionError("corpus json: " + where + " must be an array");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3) {
      throw IngestionError("corpus json: " + where + " entries must be [left, right, label]");
    }
    PairAnnotation p;
    p.left_id = e[0].get<std::string>();
    p.right_id = e[1].get<std::string>();
    const int lab = e[2].get<int>();
    if (lab != 0 && lab != 1) throw IngestionError("corpus json: label must be 0 or 1");
    p.label = static_cast<PairLabel>(lab);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace

void save_corpus_json(const Corpus& corpus, const std::filesystem::path& path) {
  json doc;
  doc["schema"] = corpus.schema;
  json offers = json::array();
  for (const auto& offer : corpus.offers) {
    json o;
    o["id"] = offer.id;
    o["source"] = offer.source;
    json attrs = json::object();
    for (size_t s = 0; s < corpus.schema.size(); ++s) {
      if (offer.attributes[s].has_value()) attrs[corpus.schema[s]] = *offer.attributes[s];
    }
    o["attributes"] = attrs;
    if (offer.cluster_id) o["cluster_id"] = *offer.cluster_id;
    if (offer.split) o["split"] = *offer.split;
    offers.push_back(std::move(o));
  }
  doc["offers"] = offers;
  doc["pairs"] = {{"train", pairs_to_json(corpus.pairs.train)},
                  {"valid", pairs_to_json(corpus.pairs.valid)},
                  {"test", pairs_to_json(corpus.pairs.test)}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
}

Corpus load_corpus_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("missing file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw IngestionError(path.string() + ": " + e.what());
  }

  Corpus corpus;
  corpus.schema = doc.at("schema").get<std::vector<std::string>>();
  for (const auto& o : doc.at("offers")) {
    Offer offer;
    offer.id = o.at("id").get<std::string>();
    offer.source = o.at("source").get<std::string>();
    offer.attributes.resize(corpus.schema.size());
    const auto& attrs = o.at("attributes");
    for (size_t s = 0; s < corpus.schema.size(); ++s) {
      const auto it = attrs.find(corpus.schema[s]);
      if (it != attrs.end()) offer.attributes[s] = it->get<std::string>();
    }
    if (o.contains("cluster_id")) offer.cluster_id = o["cluster_id"].get<std::string>();
    if (o.contains("split")) offer.split = o["split"].get<std::string>();
    corpus.offers.push_back(std::move(offer));
  }
  corpus.pairs.train = pairs_from_json(doc.at("pairs").at("train"), "pairs.train");
  corpus.pairs.valid = pairs_from_json(doc.at("pairs").at("valid"), "pairs.valid");
  corpus.pairs.test = pairs_from_json(doc.at("pairs").at("test"), "pairs.test");

  corpus.finalize();
  return corpus;
}

}  // namespace supmatch
