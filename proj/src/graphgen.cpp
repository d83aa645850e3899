#include "rigor/graphgen.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace rigor {

namespace {

std::uint64_t dart_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

// Rotation-system view used by the canonical code.
struct Embedding {
  std::vector<std::vector<int>> rot;
  std::vector<std::unordered_map<int, int>> pos;  // neighbour → index in rot[v]
  std::unordered_map<std::uint64_t, int> dart_attr;
};

Embedding embedding_of(const DecoratedGraph& g) {
  Embedding e;
  e.rot = g.rotation();
  e.pos.resize(e.rot.size());
  for (std::size_t v = 0; v < e.rot.size(); ++v) {
    for (std::size_t i = 0; i < e.rot[v].size(); ++i) e.pos[v][e.rot[v][i]] = static_cast<int>(i);
  }
  for (const auto& f : g.faces) {
    const int a = f.attr == FaceAttr::Modifiable ? 1 : 0;
    for (std::size_t i = 0; i < f.cycle.size(); ++i) e.dart_attr[dart_key(f.cycle[i], f.cycle[(i + 1) % f.cycle.size()])] = a;
  }
  return e;
}

/// BFS code from dart u→v. With reflect, rotations run backwards and each
/// dart takes the attribute of the face on its other side.
std::vector<int> code_from(const Embedding& e, int u, int v, bool reflect) {
  const std::size_t n = e.rot.size();
  std::vector<int> label(n, -1), ref(n, -1), order;
  std::vector<int> code;
  code.reserve(n + 4 * e.dart_attr.size());
  code.push_back(static_cast<int>(n));
  label[u] = 0;
  ref[u] = v;
  order.push_back(u);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int x = order[head];
    const auto& r = e.rot[x];
    const int d = static_cast<int>(r.size());
    const int start = e.pos[x].at(ref[x]);
    for (int s = 0; s < d; ++s) {
      const int w = r[((reflect ? start - s : start + s) % d + d) % d];
      if (label[w] < 0) {
        label[w] = static_cast<int>(order.size());
        ref[w] = x;
        order.push_back(w);
      }
      const int attr = e.dart_attr.at(reflect ? dart_key(w, x) : dart_key(x, w));
      code.push_back(2 * label[w] + attr);
    }
    code.push_back(-1);
  }
  return code;
}

std::vector<int> rotated(const std::vector<int>& c, std::size_t off) {
  std::vector<int> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[(off + i) % c.size()];
  return out;
}

}  // namespace

std::size_t DecoratedGraph::edge_count() const {
  std::size_t darts = 0;
  for (const auto& f : faces) darts += f.cycle.size();
  return darts / 2;
}

std::vector<int> DecoratedGraph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(vertices), 0);
  for (const auto& f : faces) {
    for (int v : f.cycle) ++d.at(static_cast<std::size_t>(v));
  }
  return d;
}

bool DecoratedGraph::has_modifiable() const {
  return std::any_of(faces.begin(), faces.end(), [](const Face& f) { return f.attr == FaceAttr::Modifiable; });
}

std::vector<std::vector<int>> DecoratedGraph::rotation() const {
  std::vector<std::map<int, int>> succ(static_cast<std::size_t>(vertices));
  for (const auto& f : faces) {
    const std::size_t k = f.cycle.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int u = f.cycle[i], v = f.cycle[(i + 1) % k], w = f.cycle[(i + 2) % k];
      if (v < 0 || v >= vertices) throw InvalidGraph("vertex out of range");
      if (!succ[v].emplace(u, w).second) throw InvalidGraph("dart repeated");
    }
  }
  std::vector<std::vector<int>> rot(static_cast<std::size_t>(vertices));
  for (int v = 0; v < vertices; ++v) {
    const auto& s = succ[v];
    if (s.size() < 2) throw InvalidGraph("vertex " + std::to_string(v) + " has degree below 2");
    int w = s.begin()->first;
    do {
      rot[v].push_back(w);
      auto it = s.find(w);
      if (it == s.end() || rot[v].size() > s.size()) throw InvalidGraph("rotation at vertex " + std::to_string(v) + " is not a permutation");
      w = it->second;
    } while (w != s.begin()->first);
    if (rot[v].size() != s.size()) throw InvalidGraph("vertex " + std::to_string(v) + " is pinched");
  }
  return rot;
}

void DecoratedGraph::validate() const {
  if (vertices < 3) throw InvalidGraph("fewer than 3 vertices");
  std::set<std::uint64_t> darts;
  for (const auto& f : faces) {
    if (f.cycle.size() < 3) throw InvalidGraph("face with fewer than 3 vertices");
    std::set<int> seen(f.cycle.begin(), f.cycle.end());
    if (seen.size() != f.cycle.size()) throw InvalidGraph("face is not a simple polygon");
    for (std::size_t i = 0; i < f.cycle.size(); ++i) {
      const int u = f.cycle[i], v = f.cycle[(i + 1) % f.cycle.size()];
      if (u < 0 || u >= vertices) throw InvalidGraph("vertex out of range");
      if (!darts.insert(dart_key(u, v)).second) throw InvalidGraph("dart repeated (multiple edge)");
    }
  }
  for (std::uint64_t d : darts) {
    const int u = static_cast<int>(d >> 32), v = static_cast<int>(d & 0xffffffffu);
    if (!darts.count(dart_key(v, u))) throw InvalidGraph("unpaired dart");
  }
  rotation();
  const long euler = static_cast<long>(vertices) - static_cast<long>(edge_count()) + static_cast<long>(faces.size());
  if (euler != 2) throw InvalidGraph("Euler characteristic " + std::to_string(euler));
}

DecoratedGraph seed_graph(int k) {
  if (k < 3) throw InvalidGraph("seed polygons have at least 3 vertices");
  DecoratedGraph g;
  g.vertices = k;
  g.seed_size = k;
  Face inner, outer;
  for (int i = 0; i < k; ++i) {
    inner.cycle.push_back(i);
    outer.cycle.push_back(k - 1 - i);
  }
  inner.attr = FaceAttr::Modifiable;
  outer.attr = FaceAttr::Unmodifiable;
  g.faces = {inner, outer};
  return g;
}

std::vector<DecoratedGraph> seed_graphs(int N) {
  if (N < 3) throw InvalidGraph("N must be at least 3");
  std::vector<DecoratedGraph> out;
  for (int k = 3; k <= N; ++k) out.push_back(seed_graph(k));
  return out;
}

std::string Refinement::to_string() const {
  if (segments.empty()) return "close";
  std::string s = "q";
  for (const auto& seg : segments) s += " " + std::to_string(seg.target) + "+" + std::to_string(seg.fresh);
  return s;
}

Refinement Refinement::parse(const std::string& text) {
  std::istringstream ss(text);
  std::string head;
  ss >> head;
  Refinement r;
  if (head == "close") {
    if (ss >> head) throw InvalidRefinement("unexpected text after 'close'");
    return r;
  }
  if (head != "q") throw InvalidRefinement("expected 'close' or 'q', got '" + text + "'");
  for (std::string t; ss >> t;) {
    const auto plus = t.find('+');
    if (plus == std::string::npos) throw InvalidRefinement("bad segment '" + t + "'");
    try {
      std::size_t a = 0, b = 0;
      const int target = std::stoi(t.substr(0, plus), &a);
      const int fresh = std::stoi(t.substr(plus + 1), &b);
      if (a != plus || b != t.size() - plus - 1) throw InvalidRefinement("bad segment '" + t + "'");
      r.segments.push_back({target, fresh});
    } catch (const std::logic_error&) {
      throw InvalidRefinement("bad segment '" + t + "'");
    }
  }
  if (r.segments.empty()) throw InvalidRefinement("'q' needs at least one segment");
  return r;
}

std::pair<std::size_t, std::size_t> selected_face_edge(const DecoratedGraph& g) {
  const Embedding e = embedding_of(g);
  std::optional<std::vector<int>> best;
  std::pair<std::size_t, std::size_t> at{0, 0};
  for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
    const Face& f = g.faces[fi];
    if (f.attr != FaceAttr::Modifiable) continue;
    for (std::size_t i = 0; i < f.cycle.size(); ++i) {
      auto code = code_from(e, f.cycle[i], f.cycle[(i + 1) % f.cycle.size()], false);
      if (!best || code < *best) {
        best = std::move(code);
        at = {fi, i};
      }
    }
  }
  if (!best) throw InvalidGraph("graph has no Modifiable face");
  return at;
}

DecoratedGraph refine(const DecoratedGraph& g, const Refinement& r) {
  const auto [fi, off] = selected_face_edge(g);
  DecoratedGraph out = g;
  out.path.push_back(r.to_string());
  if (r.is_close()) {
    out.faces[fi].attr = FaceAttr::Unmodifiable;
    return out;
  }
  const std::vector<int> P = rotated(g.faces[fi].cycle, off);
  const int k = static_cast<int>(P.size());
  std::set<std::uint64_t> darts;
  for (const auto& f : g.faces) {
    for (std::size_t i = 0; i < f.cycle.size(); ++i) darts.insert(dart_key(f.cycle[i], f.cycle[(i + 1) % f.cycle.size()]));
  }
  std::vector<int> Q{P[0], P[1]};
  std::vector<Face> regions;
  int prev = 1;
  int next_id = g.vertices;
  bool same_as_P = true;
  for (std::size_t s = 0; s < r.segments.size(); ++s) {
    const auto& seg = r.segments[s];
    const bool last = s + 1 == r.segments.size();
    if (last != (seg.target == 0)) throw InvalidRefinement("only the last segment returns to p0");
    const int t = seg.target == 0 ? k : seg.target;
    if (t <= prev || t > k) throw InvalidRefinement("segment targets must increase along P");
    const int from = prev;
    prev = t;
    if (seg.fresh < 0) throw InvalidRefinement("negative vertex count");
    std::vector<int> fresh;
    for (int j = 0; j < seg.fresh; ++j) fresh.push_back(next_id++);
    Q.insert(Q.end(), fresh.begin(), fresh.end());
    if (t != k) Q.push_back(P[t]);
    if (t == from + 1 && fresh.empty()) continue;
    same_as_P = false;
    if (fresh.empty() && darts.count(dart_key(P[from], P[t % k]))) {
      throw InvalidRefinement("chord duplicates an existing edge");
    }
    Face region;
    for (int i = from; i <= t; ++i) region.cycle.push_back(P[i % k]);
    region.cycle.insert(region.cycle.end(), fresh.rbegin(), fresh.rend());
    region.attr = FaceAttr::Modifiable;
    regions.push_back(std::move(region));
  }
  if (same_as_P) throw InvalidRefinement("Q equals P; use 'close'");
  out.faces.erase(out.faces.begin() + static_cast<std::ptrdiff_t>(fi));
  out.faces.push_back({Q, FaceAttr::Unmodifiable});
  for (auto& f : regions) out.faces.push_back(std::move(f));
  out.vertices = next_id;
  return out;
}

DecoratedGraph replay(int seed_size, const std::vector<std::string>& path) {
  DecoratedGraph g = seed_graph(seed_size);
  for (const auto& step : path) g = refine(g, Refinement::parse(step));
  return g;
}

std::string canonical_form(const DecoratedGraph& g) {
  const Embedding e = embedding_of(g);
  std::optional<std::vector<int>> best;
  for (std::size_t u = 0; u < e.rot.size(); ++u) {
    for (int v : e.rot[u]) {
      for (bool reflect : {false, true}) {
        auto code = code_from(e, static_cast<int>(u), v, reflect);
        if (!best || code < *best) best = std::move(code);
      }
    }
  }
  std::string s;
  for (std::size_t i = 0; i < best->size(); ++i) {
    if (i) s += i == 1 ? ":" : ",";
    s += std::to_string((*best)[i]);
  }
  return s;
}

namespace {

bool keep(const DecoratedGraph& g, const GeneratorConfig& cfg) {
  for (const auto& f : g.faces) {
    if (f.attr == FaceAttr::Unmodifiable && static_cast<int>(f.cycle.size()) > g.seed_size) return false;
  }
  return !cfg.prune || cfg.prune(g);
}

void enumerate_fresh(std::vector<int>& fresh, std::size_t at, int budget, const std::function<void()>& emit) {
  if (at == fresh.size()) {
    emit();
    return;
  }
  for (int j = 0; j <= budget; ++j) {
    fresh[at] = j;
    enumerate_fresh(fresh, at + 1, budget - j, emit);
  }
  fresh[at] = 0;
}

}  // namespace

std::vector<DecoratedGraph> admissible_refinements(const DecoratedGraph& g, const GeneratorConfig& cfg) {
  const auto [fi, off] = selected_face_edge(g);
  const int k = static_cast<int>(g.faces[fi].cycle.size());
  const int budget = cfg.N - g.vertices;
  std::vector<DecoratedGraph> out;
  auto consider = [&](const Refinement& r) {
    DecoratedGraph child;
    try {
      child = refine(g, r);
    } catch (const InvalidRefinement&) {
      return;
    }
    if (keep(child, cfg)) out.push_back(std::move(child));
  };
  consider(Refinement{});
  if (budget < 0) return out;
  // Subsets of the P-vertices p2..p{k-1} that Q visits, in order.
  const int free = k - 2;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free); ++mask) {
    std::vector<int> targets;
    for (int i = 0; i < free; ++i) {
      if (mask >> i & 1) targets.push_back(i + 2);
    }
    targets.push_back(0);
    std::vector<int> fresh(targets.size(), 0);
    enumerate_fresh(fresh, 0, budget, [&] {
      Refinement r;
      for (std::size_t s = 0; s < targets.size(); ++s) r.segments.push_back({targets[s], fresh[s]});
      consider(r);
    });
  }
  return out;
}

GenerationResult generate(const GeneratorConfig& cfg) {
  if (cfg.N < 3) throw InvalidGraph("N must be at least 3");
  GenerationResult res;
  std::vector<int> seeds = cfg.seeds;
  if (seeds.empty()) {
    for (int k = 3; k <= cfg.N; ++k) seeds.push_back(k);
  }
  std::set<std::string> seen;
  std::map<std::string, DecoratedGraph> terminals;
  std::vector<DecoratedGraph> frontier;
  for (int k : seeds) {
    if (k < 3 || k > cfg.N) throw InvalidGraph("seed size out of range");
    DecoratedGraph s = seed_graph(k);
    if (keep(s, cfg) && seen.insert(std::to_string(k) + "|" + canonical_form(s)).second) frontier.push_back(std::move(s));
  }
  const unsigned threads = std::max(1u, cfg.threads);
  while (!frontier.empty()) {
    std::size_t take = frontier.size();
    if (res.expanded + take > cfg.budget) {
      take = cfg.budget - res.expanded;
      res.complete = false;
    }
    std::vector<std::vector<DecoratedGraph>> children(take);
    std::vector<std::vector<std::string>> canon(take);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next++) < take;) {
        children[i] = admissible_refinements(frontier[i], cfg);
        for (const auto& c : children[i]) canon[i].push_back(canonical_form(c));
      }
    };
    if (threads == 1 || take < 2) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(threads, take); ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    res.expanded += take;
    std::vector<DecoratedGraph> next_frontier;
    for (std::size_t i = 0; i < take; ++i) {
      for (std::size_t c = 0; c < children[i].size(); ++c) {
        DecoratedGraph& child = children[i][c];
        if (child.is_terminal()) {
          terminals.emplace(canon[i][c], std::move(child));
        } else if (seen.insert(std::to_string(child.seed_size) + "|" + canon[i][c]).second) {
          next_frontier.push_back(std::move(child));
        }
      }
    }
    if (!res.complete) break;
    frontier = std::move(next_frontier);
  }
  for (auto& [c, g] : terminals) {
    res.canonical.push_back(c);
    res.terminals.push_back(std::move(g));
  }
  return res;
}

bool PruneSpec::accepts(const DecoratedGraph& g) const {
  const bool terminal = g.is_terminal();
  for (const auto& f : g.faces) {
    if (!terminal && f.attr == FaceAttr::Modifiable) continue;
    const int s = static_cast<int>(f.cycle.size());
    if (max_face && s > *max_face) return false;
    if (min_face && s < *min_face) return false;
  }
  const auto deg = g.degrees();
  for (int d : deg) {
    if (max_degree && d > *max_degree) return false;
    if (terminal && min_degree && d < *min_degree) return false;
  }
  const int F = static_cast<int>(g.faces.size());
  if (max_faces && F > *max_faces) return false;
  if (terminal && min_faces && F < *min_faces) return false;
  return true;
}

GraphPredicate PruneSpec::predicate() const {
  if (!max_face && !min_face && !max_degree && !min_degree && !max_faces && !min_faces) return {};
  PruneSpec copy = *this;
  return [copy](const DecoratedGraph& g) { return copy.accepts(g); };
}

std::string PruneSpec::to_string() const {
  std::string s;
  auto add = [&](const char* key, const std::optional<int>& v) {
    if (!v) return;
    if (!s.empty()) s += ",";
    s += std::string(key) + "=" + std::to_string(*v);
  };
  add("max-face", max_face);
  add("min-face", min_face);
  add("max-degree", max_degree);
  add("min-degree", min_degree);
  add("max-faces", max_faces);
  add("min-faces", min_faces);
  return s.empty() ? "none" : s;
}

PruneSpec PruneSpec::parse(const std::string& text) {
  PruneSpec p;
  if (text.empty() || text == "none") return p;
  if (text == "all-triangles") {
    p.max_face = 3;
    p.min_degree = 3;
    return p;
  }
  std::istringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("prune item '" + item + "' needs key=value", 0);
    const std::string key = item.substr(0, eq);
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || v < 0) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw ParseError("prune value in '" + item + "' must be a non-negative integer", eq + 1);
    }
    if (key == "max-face") p.max_face = v;
    else if (key == "min-face") p.min_face = v;
    else if (key == "max-degree") p.max_degree = v;
    else if (key == "min-degree") p.min_degree = v;
    else if (key == "max-faces") p.max_faces = v;
    else if (key == "min-faces") p.min_faces = v;
    else throw ParseError("unknown prune key '" + key + "'", 0);
  }
  return p;
}

void write_graph(std::ostream& out, const DecoratedGraph& g) {
  out << "vertices " << g.vertices << "\nseed " << g.seed_size << "\nrotation\n";
  const auto rot = g.rotation();
  for (std::size_t v = 0; v < rot.size(); ++v) {
    out << v << ":";
    for (int w : rot[v]) out << ' ' << w;
    out << '\n';
  }
  out << "faces " << g.faces.size() << '\n';
  for (const auto& f : g.faces) {
    out << (f.attr == FaceAttr::Modifiable ? 'M' : 'U');
    for (int v : f.cycle) out << ' ' << v;
    out << '\n';
  }
  out << "canonical " << canonical_form(g) << "\npath " << g.path.size() << '\n';
  for (const auto& s : g.path) out << s << '\n';
  out << "end\n";
}

DecoratedGraph read_graph(std::istream& in) {
  DecoratedGraph g;
  std::string line, word, canonical;
  std::size_t lineno = 0;
  auto next = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError("unexpected end of graph file", 0, lineno + 1);
    ++lineno;
    return std::istringstream(line);
  };
  auto expect = [&](std::istringstream& ss, const char* kw) {
    if (!(ss >> word) || word != kw) throw ParseError(std::string("expected '") + kw + "'", 0, lineno);
  };
  {
    auto ss = next();
    expect(ss, "vertices");
    if (!(ss >> g.vertices)) throw ParseError("bad vertex count", 0, lineno);
  }
  {
    auto ss = next();
    expect(ss, "seed");
    if (!(ss >> g.seed_size)) throw ParseError("bad seed size", 0, lineno);
  }
  {
    auto ss = next();
    expect(ss, "rotation");
  }
  for (int v = 0; v < g.vertices; ++v) next();
  std::size_t nf = 0;
  {
    auto ss = next();
    expect(ss, "faces");
    if (!(ss >> nf)) throw ParseError("bad face count", 0, lineno);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    auto ss = next();
    Face f;
    if (!(ss >> word) || (word != "M" && word != "U")) throw ParseError("face must start with M or U", 0, lineno);
    f.attr = word == "M" ? FaceAttr::Modifiable : FaceAttr::Unmodifiable;
    for (int v; ss >> v;) f.cycle.push_back(v);
    g.faces.push_back(std::move(f));
  }
  {
    auto ss = next();
    expect(ss, "canonical");
    ss >> canonical;
  }
  std::size_t np = 0;
  {
    auto ss = next();
    expect(ss, "path");
    if (!(ss >> np)) throw ParseError("bad path length", 0, lineno);
  }
  for (std::size_t i = 0; i < np; ++i) {
    next();
    g.path.push_back(line);
  }
  {
    auto ss = next();
    expect(ss, "end");
  }
  try {
    g.validate();
  } catch (const InvalidGraph& e) {
    throw ParseError(std::string("invalid graph: ") + e.what(), 0, lineno);
  }
  if (canonical_form(g) != canonical) throw ParseError("canonical form does not match the faces", 0, lineno);
  return g;
}

}  // namespace rigor
