#include "pansched/contact_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pansched/error.hpp"

namespace pansched {

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

ContactGraph::ContactGraph(std::size_t n)
    : n_(n), p_(n * n, 0.0), vaccinated_(n, 0) {}

void ContactGraph::check_index(std::size_t i) const {
  if (i >= n_) {
    throw Error(Errc::invalid_argument,
                "employee index " + std::to_string(i) + " out of range (n=" + std::to_string(n_) + ")");
  }
}

void ContactGraph::set_contact(std::size_t i, std::size_t j, double p) {
  check_index(i);
  check_index(j);
  if (i == j) {
    throw Error(Errc::invalid_argument, "self-contact p(i,i) is not allowed (i=" + std::to_string(i) + ")");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(Errc::invalid_argument, "contact probability must lie in [0,1], got " + std::to_string(p));
  }
  p_[i * n_ + j] = p;
  p_[j * n_ + i] = p;
}

std::size_t ContactGraph::vaccinated_count() const {
  return static_cast<std::size_t>(std::count(vaccinated_.begin(), vaccinated_.end(), 1));
}

std::size_t ContactGraph::edge_count() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (p_[i * n_ + j] > 0.0) ++c;
  return c;
}

ContactGraph load_edge_list(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open edge list: " + path);

  struct Edge {
    std::size_t i, j;
    double p;
  };
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line) || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double p = 0.0;
    if (!(ls >> i >> j >> p)) {
      // Permit a single header row.
      if (lineno == 1) continue;
      throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": expected 'i,j,p'");
    }
    std::string trailing;
    if (ls >> trailing) {
      throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": trailing data '" + trailing + "'");
    }
    if (i < 0 || j < 0) {
      throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": negative employee index");
    }
    if (i == j) {
      throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": self-loop on " + std::to_string(i));
    }
    auto a = static_cast<std::size_t>(std::min(i, j));
    auto b = static_cast<std::size_t>(std::max(i, j));
    if (!seen.insert({a, b}).second) {
      throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) + ": duplicate edge (" +
                                         std::to_string(a) + "," + std::to_string(b) + ")");
    }
    max_index = std::max(max_index, b);
    edges.push_back({a, b, p});
  }

  std::size_t size = n;
  if (size == 0) {
    size = edges.empty() ? 0 : max_index + 1;
  } else if (!edges.empty() && max_index >= size) {
    throw Error(Errc::invalid_argument, "edge index " + std::to_string(max_index) +
                                            " exceeds requested graph size " + std::to_string(size));
  }

  ContactGraph g(size);
  for (const auto& e : edges) g.set_contact(e.i, e.j, e.p);
  return g;
}

void save_edge_list(const ContactGraph& g, const std::string& path, const EdgeListMeta& meta) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write edge list: " + path);
  out << "i,j,p\n";
  out.precision(17);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.contact(i, j) > 0.0) out << i << ',' << j << ',' << g.contact(i, j) << '\n';
  if (!out) throw Error(Errc::io_error, "short write: " + path);

  nlohmann::json side;
  side["n"] = g.size();
  auto& vac = side["vaccinated"] = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) vac.push_back(g.vaccinated(i));
  if (!meta.profile.empty()) side["profile"] = meta.profile;
  if (meta.has_seed) side["seed"] = meta.seed;
  if (!meta.external_ids.empty()) side["external_ids"] = meta.external_ids;
  std::ofstream mout(path + ".meta.json");
  if (!mout) throw Error(Errc::io_error, "cannot write sidecar: " + path + ".meta.json");
  mout << side.dump(2) << '\n';
}

EdgeListBundle load_edge_list_bundle(const std::string& path, std::size_t n) {
  EdgeListBundle bundle;
  const std::string meta_path = path + ".meta.json";
  std::ifstream min(meta_path);
  if (!min) {
    bundle.graph = load_edge_list(path, n);
    return bundle;
  }

  nlohmann::json side = nlohmann::json::parse(min, nullptr, false);
  if (side.is_discarded() || !side.is_object()) {
    throw Error(Errc::parse_error, meta_path + ": invalid JSON sidecar");
  }
  try {
    std::size_t side_n = side.contains("n") ? side["n"].get<std::size_t>() : 0;
    bundle.graph = load_edge_list(path, n > 0 ? n : side_n);
    if (side.contains("vaccinated")) {
      auto flags = side["vaccinated"].get<std::vector<bool>>();
      if (flags.size() != bundle.graph.size()) {
        throw Error(Errc::parse_error, meta_path + ": vaccinated flag count mismatches n");
      }
      for (std::size_t i = 0; i < flags.size(); ++i) bundle.graph.set_vaccinated(i, flags[i]);
    }
    if (side.contains("profile")) bundle.meta.profile = side["profile"].get<std::string>();
    if (side.contains("seed")) {
      bundle.meta.has_seed = true;
      bundle.meta.seed = side["seed"].get<std::uint64_t>();
    }
    if (side.contains("external_ids")) {
      bundle.meta.external_ids = side["external_ids"].get<std::vector<std::int64_t>>();
      if (bundle.meta.external_ids.size() != bundle.graph.size()) {
        throw Error(Errc::parse_error, meta_path + ": external id count mismatches n");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, meta_path + ": " + e.what());
  }
  return bundle;
}

std::vector<InteractionRecord> read_interaction_log(std::istream& in) {
  std::vector<InteractionRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line) || line[0] == '#') continue;
    std::istringstream ls(line);
    InteractionRecord r;
    if (!(ls >> r.timestamp >> r.id_a >> r.id_b)) {
      throw Error(Errc::parse_error, "interaction log line " + std::to_string(lineno) +
                                         ": expected 'timestamp id_a id_b'");
    }
    if (r.id_a == r.id_b) {
      throw Error(Errc::parse_error, "interaction log line " + std::to_string(lineno) +
                                         ": self-interaction of id " + std::to_string(r.id_a));
    }
    records.push_back(r);
  }
  return records;
}

std::vector<InteractionRecord> read_interaction_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open interaction log: " + path);
  return read_interaction_log(in);
}

IngestResult build_from_interactions(const std::vector<InteractionRecord>& records,
                                     std::size_t observation_days) {
  if (records.empty()) throw Error(Errc::invalid_argument, "interaction log is empty");

  std::set<std::int64_t> ids;
  std::set<std::int64_t> days;
  for (const auto& r : records) {
    ids.insert(r.id_a);
    ids.insert(r.id_b);
    // floor division; timestamps may predate the epoch in synthetic data
    std::int64_t day = r.timestamp / 86400;
    if (r.timestamp % 86400 < 0) --day;
    days.insert(day);
  }
  std::size_t obs = observation_days != 0 ? observation_days : days.size();

  IngestResult out;
  out.external_ids.assign(ids.begin(), ids.end());
  std::map<std::int64_t, std::size_t> dense;
  for (std::size_t k = 0; k < out.external_ids.size(); ++k) dense[out.external_ids[k]] = k;

  const std::size_t n = out.external_ids.size();
  std::vector<double> c(n * n, 0.0);  // daily contact counts c_ij
  for (const auto& r : records) {
    std::size_t a = dense[r.id_a];
    std::size_t b = dense[r.id_b];
    c[a * n + b] += 1.0;
    c[b * n + a] += 1.0;
  }
  for (auto& v : c) v /= static_cast<double>(obs);

  // d_i: mean daily contacts over the colleagues i actually met.
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t met = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (c[i * n + j] > 0.0) {
        sum += c[i * n + j];
        ++met;
      }
    }
    d[i] = met ? sum / static_cast<double>(met) : 0.0;
  }

  out.graph = ContactGraph(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double cij = c[i * n + j];
      if (cij <= 0.0) continue;
      double ri = cij / d[i];  // d_i > 0 whenever c_ij > 0
      double rj = cij / d[j];
      double p = (ri >= 1.0 || rj >= 1.0) ? 1.0 : std::max(ri, rj);
      out.graph.set_contact(i, j, p);
    }
  }
  return out;
}

ContactGraph gen_random_graph(std::size_t n, RandomGraphKind kind, std::uint64_t seed) {
  if (n < 2) throw Error(Errc::invalid_argument, "random graph needs n >= 2");
  const double p_full = kind == RandomGraphKind::sparse ? 0.05 : 0.10;
  const double p_half = kind == RandomGraphKind::sparse ? 0.10 : 0.20;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ContactGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r = u(rng);
      if (r < p_full)
        g.set_contact(i, j, 1.0);
      else if (r < p_full + p_half)
        g.set_contact(i, j, 0.5);
    }
  }
  return g;
}

void assign_vaccination(ContactGraph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(Errc::invalid_argument, "vaccination fraction must lie in [0,1]");
  }
  const std::size_t n = g.size();
  auto count = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n; ++i) g.set_vaccinated(order[i], i < count);
}

}  // namespace pansched
