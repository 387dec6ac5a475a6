#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsc/cluster.hpp"
#include "gsc/corpus.hpp"
#include "gsc/embed.hpp"
#include "gsc/errors.hpp"
#include "gsc/eval.hpp"
#include "gsc/explain.hpp"
#include "gsc/version.hpp"

namespace gsc {

using json = nlohmann::json;

/// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path + " for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  return out;
}

// Minimal CSV quoting: only ids can contain awkward characters.
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "not a number: \"" + s + "\"");
  }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Corpus JSONL: one object per line with "id", "text" and optional "label".

inline Corpus load_corpus_jsonl(const std::string& path) {
  auto in = detail::open_input(path);
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") ||
        !rec["id"].is_string() || !rec["text"].is_string())
      throw ParseError(line_no, "record needs string fields id and text");
    Doc doc;
    doc.id = rec["id"].get<std::string>();
    doc.text = rec["text"].get<std::string>();
    if (rec.contains("label") && !rec["label"].is_null()) {
      if (!rec["label"].is_string())
        throw ParseError(line_no, "label must be a string");
      doc.label = rec["label"].get<std::string>();
    }
    if (!seen.insert(doc.id).second) throw DuplicateIdError(doc.id);
    corpus.docs.push_back(std::move(doc));
  }
  if (corpus.docs.size() < 2) throw TooFewDocumentsError(corpus.docs.size());
  return corpus;
}

inline void save_corpus_jsonl(const std::string& path, const Corpus& corpus) {
  auto out = detail::open_output(path);
  for (const auto& doc : corpus.docs) {
    json rec{{"id", doc.id}, {"text", doc.text}};
    if (doc.label) rec["label"] = *doc.label;
    out << rec.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Matrix / embedding / labels / spectrum CSV.

/// Writes a matrix as CSV. With ids, the first row is "id,<ids...>" and each
/// data row is prefixed with its id; without ids the file is bare floats.
inline void write_matrix_csv(const std::string& path, const Matrix& m,
                             const std::vector<std::string>* ids = nullptr) {
  auto out = detail::open_output(path);
  if (ids) {
    out << "id";
    for (const auto& id : *ids) out << ',' << detail::csv_quote(id);
    out << '\n';
  }
  for (Index i = 0; i < m.rows(); ++i) {
    if (ids) out << detail::csv_quote((*ids)[static_cast<std::size_t>(i)]) << ',';
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline Matrix read_matrix_csv(const std::string& path, bool headered = false) {
  auto in = detail::open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (first && headered) {
      first = false;
      continue;
    }
    first = false;
    auto fields = detail::csv_split(line);
    std::size_t start = headered ? 1 : 0;
    std::vector<double> row;
    row.reserve(fields.size() - start);
    for (std::size_t f = start; f < fields.size(); ++f)
      row.push_back(detail::parse_double(fields[f], line_no));
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError(line_no, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline void write_embedding_csv(const std::string& path, const Embedding& emb,
                                const std::vector<std::string>& ids) {
  if (static_cast<Index>(ids.size()) != emb.n())
    throw ValidationError("id count does not match embedding rows");
  auto out = detail::open_output(path);
  out << "doc_id";
  for (Index j = 0; j < emb.dim(); ++j) out << ",z_" << (j + 1);
  out << '\n';
  for (Index i = 0; i < emb.n(); ++i) {
    out << detail::csv_quote(ids[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < emb.dim(); ++j)
      out << ',' << format_double(emb.coords(i, j));
    out << '\n';
  }
}

struct EmbeddingFile {
  std::vector<std::string> ids;
  Matrix coords;
};

inline EmbeddingFile read_embedding_csv(const std::string& path) {
  auto in = detail::open_input(path);
  EmbeddingFile file;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = detail::csv_split(line);
    if (fields.empty()) throw ParseError(line_no, "empty row");
    file.ids.push_back(fields[0]);
    std::vector<double> row;
    row.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f)
      row.push_back(detail::parse_double(fields[f], line_no));
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError(line_no, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  file.coords = Matrix(static_cast<Index>(rows.size()),
                       rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < file.coords.rows(); ++i)
    for (Index j = 0; j < file.coords.cols(); ++j)
      file.coords(i, j) =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return file;
}

inline void write_spectrum_csv(const std::string& path, const Vector& values) {
  auto out = detail::open_output(path);
  out << "index,eigenvalue\n";
  for (Index i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i]) << '\n';
}

inline void write_labels_csv(const std::string& path,
                             const std::vector<std::string>& ids,
                             const std::vector<int>& labels) {
  if (ids.size() != labels.size())
    throw ValidationError("id count does not match label count");
  auto out = detail::open_output(path);
  out << "doc_id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << detail::csv_quote(ids[i]) << ',' << labels[i] << '\n';
}

struct LabelsFile {
  std::vector<std::string> ids;
  std::vector<std::string> labels;

  std::vector<int> int_labels() const {
    std::vector<int> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      try {
        out.push_back(std::stoi(labels[i]));
      } catch (const std::exception&) {
        throw ValidationError("label \"" + labels[i] + "\" is not an integer");
      }
    }
    return out;
  }
};

inline LabelsFile read_labels_csv(const std::string& path) {
  auto in = detail::open_input(path);
  LabelsFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = detail::csv_split(line);
    if (fields.size() != 2) throw ParseError(line_no, "expected doc_id,label");
    file.ids.push_back(fields[0]);
    file.labels.push_back(fields[1]);
  }
  return file;
}

// ---------------------------------------------------------------------------
// Metadata sidecars: every artifact gets <stem>.meta.json with enough
// information to re-run the producing command bit-identically.

inline json make_metadata(const std::string& command, json config) {
  return json{{"tool", "gsc"},
              {"version", kVersion},
              {"command", command},
              {"config", std::move(config)}};
}

inline std::string sidecar_path(const std::string& artifact_path) {
  std::filesystem::path p(artifact_path);
  p.replace_extension();
  return p.string() + ".meta.json";
}

inline void write_metadata(const std::string& artifact_path, const json& meta) {
  auto out = detail::open_output(sidecar_path(artifact_path));
  out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// JSON views of the domain types.

inline json to_json(const TermScore& ts) {
  return json{{"term", ts.term}, {"score", ts.score}};
}

inline json to_json(const std::vector<TermScore>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back(to_json(t));
  return arr;
}

inline json to_json(const ClusterProfile& p, const std::vector<std::string>& vocab) {
  json centroid = json::object();
  for (Index t = 0; t < p.centroid.size(); ++t)
    if (p.centroid[t] != 0.0)
      centroid[vocab[static_cast<std::size_t>(t)]] = p.centroid[t];
  return json{{"cluster", p.cluster},
              {"size", p.size},
              {"self_constant", p.self_constant},
              {"top_terms", to_json(p.top_terms)},
              {"centroid", std::move(centroid)}};
}

inline json to_json(const Explanation& ex) {
  json contrastive = json::array();
  for (const auto& block : ex.contrastive)
    contrastive.push_back(json{{"cluster", block.cluster},
                               {"center_distance", block.center_distance},
                               {"terms", to_json(block.terms)}});
  return json{{"doc_id", ex.doc_id},
              {"cluster", ex.cluster},
              {"memb", ex.memb},
              {"center_distance_own", ex.center_distance_own},
              {"supporting_terms", to_json(ex.supporting_terms)},
              {"contrastive", std::move(contrastive)}};
}

inline std::vector<TermScore> term_scores_from_json(const json& arr) {
  std::vector<TermScore> out;
  out.reserve(arr.size());
  for (const auto& t : arr)
    out.push_back(TermScore{t.at("term").get<std::string>(),
                            t.at("score").get<double>()});
  return out;
}

inline Explanation explanation_from_json(const json& j) {
  Explanation ex;
  ex.doc_id = j.at("doc_id").get<std::string>();
  ex.cluster = j.at("cluster").get<int>();
  ex.memb = j.at("memb").get<double>();
  ex.center_distance_own = j.at("center_distance_own").get<double>();
  ex.supporting_terms = term_scores_from_json(j.at("supporting_terms"));
  for (const auto& b : j.at("contrastive")) {
    ContrastiveBlock block;
    block.cluster = b.at("cluster").get<int>();
    block.center_distance = b.at("center_distance").get<double>();
    block.terms = term_scores_from_json(b.at("terms"));
    ex.contrastive.push_back(std::move(block));
  }
  return ex;
}

inline json to_json(const ScoreReport& r) {
  return json{{"rand", r.rand},
              {"adjusted_rand", r.adjusted_rand},
              {"fowlkes_mallows", r.fowlkes_mallows},
              {"mutual_info", r.mutual_info},
              {"normalized_mutual_info", r.normalized_mutual_info},
              {"adjusted_mutual_info", r.adjusted_mutual_info},
              {"homogeneity", r.homogeneity},
              {"completeness", r.completeness},
              {"v_measure", r.v_measure},
              {"f_score", r.f_score},
              {"error_rate", r.error_rate}};
}

/// Aligned text table using the row names of the reference reports.
inline std::string score_report_text(const ScoreReport& r) {
  const std::pair<const char*, double> rows[] = {
      {"adjusted mutual info score:", r.adjusted_mutual_info},
      {"adjusted rand score:", r.adjusted_rand},
      {"completeness score:", r.completeness},
      {"fowlkes mallows score:", r.fowlkes_mallows},
      {"homogeneity score:", r.homogeneity},
      {"mutual info score:", r.mutual_info},
      {"normalized mutual info score:", r.normalized_mutual_info},
      {"rand score:", r.rand},
      {"v measure score:", r.v_measure},
      {"F-score:", r.f_score},
      {"error rate:", r.error_rate},
  };
  std::ostringstream out;
  for (const auto& [name, value] : rows) {
    out << name;
    for (std::size_t pad = std::string(name).size(); pad < 32; ++pad)
      out << ' ';
    out << format_double(value) << '\n';
  }
  return out.str();
}

inline json to_json(const Clustering& c) {
  return json{{"labels", c.labels},
              {"k", c.k},
              {"objective", c.objective},
              {"iterations", c.iterations},
              {"seed", c.seed}};
}

} // namespace gsc
