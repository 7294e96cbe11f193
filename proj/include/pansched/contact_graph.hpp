#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pansched {

// Symmetric contact graph over n employees. p(i,j) in [0,1] is the contact
// probability per working day; vaccinated(i) feeds the susceptibility scaling
// in the infection model. Stored dense: scheduling instances are small
// (n <= a few hundred) and the propagation loop reads rows sequentially.
class ContactGraph {
 public:
  ContactGraph() = default;
  explicit ContactGraph(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  double contact(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }

  // Sets p(i,j) and p(j,i). Rejects self-loops and probabilities outside [0,1].
  void set_contact(std::size_t i, std::size_t j, double p);

  bool vaccinated(std::size_t i) const { return vaccinated_[i] != 0; }
  void set_vaccinated(std::size_t i, bool v) { vaccinated_[i] = v ? 1 : 0; }
  std::size_t vaccinated_count() const;

  // Edges with p > 0, i < j.
  std::size_t edge_count() const;

  const std::vector<double>& matrix() const noexcept { return p_; }

 private:
  void check_index(std::size_t i) const;

  std::size_t n_ = 0;
  std::vector<double> p_;          // row-major n x n
  std::vector<std::uint8_t> vaccinated_;
};

// One record of a raw interaction log: a contact between two employees at a
// point in time (seconds).
struct InteractionRecord {
  std::int64_t timestamp = 0;
  std::int64_t id_a = 0;
  std::int64_t id_b = 0;
};

struct IngestResult {
  ContactGraph graph;
  std::vector<std::int64_t> external_ids;  // dense index -> original id
};

// Loads an edge-list CSV "i,j,p" (header optional, blank lines and lines
// starting with '#' skipped). n must be at least max index + 1; passing n = 0
// sizes the graph from the data. Duplicate pairs and self-loops are errors.
ContactGraph load_edge_list(const std::string& path, std::size_t n = 0);

// Optional provenance recorded in the export sidecar.
struct EdgeListMeta {
  std::string profile;  // empty = omit
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> external_ids;  // empty = omit
};

// Writes "i,j,p" rows (i < j, p > 0) plus a JSON sidecar <path>.meta.json
// carrying n and the vaccination flags so a round trip preserves isolated
// vertices and vaccination state, along with any provenance in meta.
void save_edge_list(const ContactGraph& g, const std::string& path, const EdgeListMeta& meta = {});

struct EdgeListBundle {
  ContactGraph graph;  // vaccination flags applied from the sidecar
  EdgeListMeta meta;   // provenance carried by the sidecar, if any
};

// load_edge_list plus the <path>.meta.json sidecar when one exists, making a
// save/load round trip lossless. An explicit n > 0 overrides the sidecar's;
// sidecar vectors that disagree with the final size are parse errors.
EdgeListBundle load_edge_list_bundle(const std::string& path, std::size_t n = 0);

// Parses a whitespace-separated interaction log "timestamp id_a id_b".
std::vector<InteractionRecord> read_interaction_log(std::istream& in);
std::vector<InteractionRecord> read_interaction_log_file(const std::string& path);

// Aggregates raw interactions into daily contact probabilities:
//   day(r)   = floor(timestamp / 86400)
//   c_ij     = #records(i,j) / observation_days
//   d_i      = mean over contacted colleagues j of c_ij
//   p_ij     = 1 if c_ij >= d_i or c_ij >= d_j, else max(c_ij/d_i, c_ij/d_j)
// observation_days = 0 means "number of distinct days seen in the log".
// External ids are mapped to dense indices in ascending order.
IngestResult build_from_interactions(const std::vector<InteractionRecord>& records,
                                     std::size_t observation_days = 0);

enum class RandomGraphKind {
  sparse,  // p=1 w.p. 0.05, p=0.5 w.p. 0.10, else 0
  dense,   // p=1 w.p. 0.10, p=0.5 w.p. 0.20, else 0
};

ContactGraph gen_random_graph(std::size_t n, RandomGraphKind kind, std::uint64_t seed);

// Marks exactly round(fraction * n) employees vaccinated, chosen uniformly
// at random; previous flags are overwritten.
void assign_vaccination(ContactGraph& g, double fraction, std::uint64_t seed);

}  // namespace pansched
