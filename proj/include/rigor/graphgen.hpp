#pragma once

// Decorated sphere graphs and their enumeration by admissible face
// refinement.
//
// A graph is stored as its faces: oriented simple cycles in which every
// directed edge (dart) occurs exactly once. The face containing dart u→v
// continues with v→w where w follows u in the rotation at v.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rigor/error.hpp"

namespace rigor {

enum class FaceAttr { Modifiable, Unmodifiable };

struct Face {
  std::vector<int> cycle;
  FaceAttr attr = FaceAttr::Modifiable;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class InvalidRefinement : public Error {
 public:
  using Error::Error;
};

struct DecoratedGraph {
  int vertices = 0;
  std::vector<Face> faces;
  int seed_size = 0;              // faces may not exceed this once final
  std::vector<std::string> path;  // refinement steps from the seed

  std::size_t edge_count() const;
  std::vector<int> degrees() const;
  bool has_modifiable() const;
  bool is_terminal() const { return !has_modifiable(); }
  /// Neighbours of each vertex in rotation order. Throws InvalidGraph if the
  /// faces do not form a sphere embedding.
  std::vector<std::vector<int>> rotation() const;
  /// Simple faces, paired darts, no loops or multiple edges, one rotation
  /// cycle per vertex, V − E + F = 2.
  void validate() const;
};

/// A k-cycle with one Modifiable and one Unmodifiable face for k = 3..N.
std::vector<DecoratedGraph> seed_graphs(int N);
DecoratedGraph seed_graph(int k);

/// One step of refinement of the selected face P = p0 p1 … p{k-1}, whose first
/// edge p0→p1 is the selected edge. Q runs p0 → p1 and then, per segment, to
/// P-vertex `target` (increasing, 0 closing the cycle) through `fresh` new
/// interior vertices. An empty segment list is the P = Q step.
struct Refinement {
  struct Segment {
    int target = 0;
    int fresh = 0;
  };
  std::vector<Segment> segments;

  bool is_close() const { return segments.empty(); }
  std::string to_string() const;  // "close" or "q 2+0 0+1"
  static Refinement parse(const std::string& text);
};

/// Index of the selected Modifiable face and the rotation of its cycle that
/// starts at the selected edge.
std::pair<std::size_t, std::size_t> selected_face_edge(const DecoratedGraph& g);

/// Applies r to the selected face. Throws InvalidRefinement if r is not
/// admissible (indices out of order, repeated edge, degenerate Q).
DecoratedGraph refine(const DecoratedGraph& g, const Refinement& r);

/// Rebuilds a graph from its seed size and recorded steps.
DecoratedGraph replay(int seed_size, const std::vector<std::string>& path);

/// Accepts a graph (true) or drops it with all its descendants (false).
using GraphPredicate = std::function<bool(const DecoratedGraph&)>;

struct GeneratorConfig {
  int N = 3;
  GraphPredicate prune;  // empty accepts everything
  std::size_t budget = 2'000'000;  // graphs expanded before giving up
  unsigned threads = 1;
  std::vector<int> seeds;  // seed sizes; empty means 3..N
};

/// Every refinement of the selected face through the selected edge that keeps
/// at most cfg.N vertices, honours the seed size and passes cfg.prune.
/// Throws InvalidGraph when g has no Modifiable face.
std::vector<DecoratedGraph> admissible_refinements(const DecoratedGraph& g, const GeneratorConfig& cfg);

/// Invariant under orientation-preserving and reversing isomorphisms that
/// preserve face attributes.
std::string canonical_form(const DecoratedGraph& g);

struct GenerationResult {
  std::vector<DecoratedGraph> terminals;  // sorted by canonical form
  std::vector<std::string> canonical;     // same order
  bool complete = true;
  std::size_t expanded = 0;
};

GenerationResult generate(const GeneratorConfig& cfg);

/// Caps on final faces, degrees and face counts. Checks that can still change
/// in descendants (lower bounds, sizes of Modifiable faces) wait for terminal
/// graphs, so dropping a graph never loses an accepted terminal.
struct PruneSpec {
  std::optional<int> max_face, min_face, max_degree, min_degree, max_faces, min_faces;

  bool accepts(const DecoratedGraph& g) const;
  GraphPredicate predicate() const;
  std::string to_string() const;
  /// "none", "all-triangles" or comma-separated key=value with keys
  /// max-face, min-face, max-degree, min-degree, max-faces, min-faces.
  static PruneSpec parse(const std::string& text);
};

/// Text form: vertex count, seed, rotation system, faces, canonical form and
/// derivation path.
void write_graph(std::ostream& out, const DecoratedGraph& g);
DecoratedGraph read_graph(std::istream& in);

}  // namespace rigor
