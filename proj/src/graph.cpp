#include "matchjump/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace mj {

namespace {
std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}
}  // namespace

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edge_list) : n_(n) {
    require(n >= 0, "graph: vertex count must be non-negative");
    adj_.resize(static_cast<size_t>(n));
    edges_.reserve(edge_list.size());
    for (auto [u, v] : edge_list) {
        require(u >= 0 && u < n && v >= 0 && v < n, "graph: edge endpoint out of range");
        require(u != v, "graph: self-loops are not allowed");
        if (u > v) std::swap(u, v);
        auto key = edge_key(u, v);
        require(!edge_index_.count(key), "graph: duplicate edge");
        int id = static_cast<int>(edges_.size());
        edge_index_.emplace(key, id);
        edges_.emplace_back(u, v);
        adj_[static_cast<size_t>(u)].emplace_back(v, id);
        adj_[static_cast<size_t>(v)].emplace_back(u, id);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

int Graph::edge_between(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return -1;
    auto it = edge_index_.find(edge_key(u, v));
    return it == edge_index_.end() ? -1 : it->second;
}

Graph Graph::edge_subgraph(const std::vector<int>& kept_edges) const {
    std::vector<std::pair<int, int>> list;
    list.reserve(kept_edges.size());
    for (int e : kept_edges) {
        require(e >= 0 && e < m(), "edge_subgraph: edge id out of range");
        list.push_back(edges_[static_cast<size_t>(e)]);
    }
    return Graph(n_, list);
}

std::optional<std::vector<std::uint8_t>> bipartition(const Graph& g) {
    std::vector<std::uint8_t> side(static_cast<size_t>(g.n()), 2);
    std::queue<int> q;
    for (int s = 0; s < g.n(); ++s) {
        if (side[static_cast<size_t>(s)] != 2) continue;
        side[static_cast<size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [w, e] : g.adj(v)) {
                (void)e;
                if (side[static_cast<size_t>(w)] == 2) {
                    side[static_cast<size_t>(w)] = static_cast<std::uint8_t>(1 - side[static_cast<size_t>(v)]);
                    q.push(w);
                } else if (side[static_cast<size_t>(w)] == side[static_cast<size_t>(v)]) {
                    return std::nullopt;
                }
            }
        }
    }
    return side;
}

std::vector<int> connected_components(const Graph& g) {
    std::vector<int> comp(static_cast<size_t>(g.n()), -1);
    int next = 0;
    std::queue<int> q;
    for (int s = 0; s < g.n(); ++s) {
        if (comp[static_cast<size_t>(s)] >= 0) continue;
        comp[static_cast<size_t>(s)] = next;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [w, e] : g.adj(v)) {
                (void)e;
                if (comp[static_cast<size_t>(w)] < 0) {
                    comp[static_cast<size_t>(w)] = next;
                    q.push(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

Matching::Matching(const Graph& g, std::vector<int> edge_ids)
    : edge_ids_(std::move(edge_ids)),
      has_edge_(static_cast<size_t>(g.m()), 0),
      vertex_edge_(static_cast<size_t>(g.n()), -1) {
    std::sort(edge_ids_.begin(), edge_ids_.end());
    for (int e : edge_ids_) {
        require(e >= 0 && e < g.m(), "matching: edge id out of range");
        require(!has_edge_[static_cast<size_t>(e)], "matching: duplicate edge");
        has_edge_[static_cast<size_t>(e)] = 1;
        auto [u, v] = g.edge(e);
        require(vertex_edge_[static_cast<size_t>(u)] < 0 && vertex_edge_[static_cast<size_t>(v)] < 0,
                "matching: edges share a vertex");
        vertex_edge_[static_cast<size_t>(u)] = e;
        vertex_edge_[static_cast<size_t>(v)] = e;
    }
}

std::vector<int> Matching::free_vertices(const Graph& g) const {
    std::vector<int> out;
    for (int v = 0; v < g.n(); ++v)
        if (!covers(v)) out.push_back(v);
    return out;
}

bool is_maximal(const Graph& g, const Matching& m) {
    for (auto [u, v] : g.edges())
        if (!m.covers(u) && !m.covers(v)) return false;
    return true;
}

SymDiffDecomposition sym_diff_decompose(const Graph& g, const Matching& ms, const Matching& mt) {
    SymDiffDecomposition out;
    out.comp_of_vertex.assign(static_cast<size_t>(g.n()), -1);
    out.comp_of_edge.assign(static_cast<size_t>(g.m()), -1);

    // Adjacency inside the symmetric difference; every vertex has degree <= 2.
    std::vector<std::vector<std::pair<int, int>>> dadj(static_cast<size_t>(g.n()));
    for (int e = 0; e < g.m(); ++e) {
        if (ms.contains_edge(e) == mt.contains_edge(e)) continue;
        ++out.d;
        auto [u, v] = g.edge(e);
        dadj[static_cast<size_t>(u)].emplace_back(v, e);
        dadj[static_cast<size_t>(v)].emplace_back(u, e);
    }
    for (auto& a : dadj) std::sort(a.begin(), a.end());

    // Gather the component of each unseen vertex, then emit it with the
    // canonical orientation. Scanning vertices ascending means each component is
    // discovered at its smallest vertex, so components come out ordered.
    std::vector<char> seen(static_cast<size_t>(g.n()), 0);
    auto walk = [&](int start, int first_nb, int first_edge, SymDiffComponent& c) {
        c.vertices.push_back(start);
        int cur = first_nb, via = first_edge;
        while (true) {
            c.vertices.push_back(cur);
            c.edge_ids.push_back(via);
            if (cur == start) {  // closed a cycle; drop the repeated vertex
                c.vertices.pop_back();
                return;
            }
            int nxt = -1, nxt_e = -1;
            for (auto [w, e] : dadj[static_cast<size_t>(cur)]) {
                if (e == via) continue;
                nxt = w;
                nxt_e = e;
                break;
            }
            if (nxt < 0) return;  // path end
            cur = nxt;
            via = nxt_e;
        }
    };

    for (int v = 0; v < g.n(); ++v) {
        if (seen[static_cast<size_t>(v)] || dadj[static_cast<size_t>(v)].empty()) continue;
        SymDiffComponent c;
        if (dadj[static_cast<size_t>(v)].size() == 2) {
            // v is the smallest vertex of its component. Walk toward the smaller
            // neighbor; if we come back around it was a cycle with the canonical
            // start, otherwise v was interior to a path and we re-walk from the
            // canonical endpoint.
            walk(v, dadj[static_cast<size_t>(v)][0].first, dadj[static_cast<size_t>(v)][0].second, c);
            if (c.edge_ids.size() == c.vertices.size()) {
                c.is_cycle = true;
            } else {
                SymDiffComponent other;  // second direction from v
                walk(v, dadj[static_cast<size_t>(v)][1].first, dadj[static_cast<size_t>(v)][1].second, other);
                int a = c.vertices.back(), b = other.vertices.back();
                const SymDiffComponent& from_end = a <= b ? c : other;
                SymDiffComponent joined;
                joined.vertices.assign(from_end.vertices.rbegin(), from_end.vertices.rend());
                joined.edge_ids.assign(from_end.edge_ids.rbegin(), from_end.edge_ids.rend());
                const SymDiffComponent& tail = a <= b ? other : c;
                joined.vertices.insert(joined.vertices.end(), tail.vertices.begin() + 1, tail.vertices.end());
                joined.edge_ids.insert(joined.edge_ids.end(), tail.edge_ids.begin(), tail.edge_ids.end());
                c = std::move(joined);
                c.is_cycle = false;
            }
        } else {
            // v is a path endpoint (degree 1) and the smallest component vertex,
            // hence also the smaller endpoint: canonical start.
            walk(v, dadj[static_cast<size_t>(v)][0].first, dadj[static_cast<size_t>(v)][0].second, c);
            c.is_cycle = false;
        }
        for (int u : c.vertices) seen[static_cast<size_t>(u)] = 1;
        for (int e : c.edge_ids) {
            if (ms.contains_edge(e))
                ++c.ms_edges;
            else
                ++c.mt_edges;
        }
        out.components.push_back(std::move(c));
    }
    for (int i = 0; i < static_cast<int>(out.components.size()); ++i) {
        for (int v : out.components[static_cast<size_t>(i)].vertices)
            out.comp_of_vertex[static_cast<size_t>(v)] = i;
        for (int e : out.components[static_cast<size_t>(i)].edge_ids)
            out.comp_of_edge[static_cast<size_t>(e)] = i;
    }
    return out;
}

namespace {
int parse_vertex(const std::string& tok, int n, const std::string& line) {
    int v;
    try {
        size_t pos = 0;
        v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
        throw parse_error("instance: bad vertex token '" + tok + "' in line: " + line);
    }
    if (v < 1 || v > n) throw parse_error("instance: vertex " + tok + " out of range in line: " + line);
    return v - 1;
}
}  // namespace

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> s_edges, t_edges;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "p") {
            if (n >= 0) throw parse_error("instance: repeated 'p' line");
            if (!(ls >> n >> m) || n < 0 || m < 0) throw parse_error("instance: bad 'p' line: " + line);
        } else if (kind == "e" || kind == "s" || kind == "t") {
            if (n < 0) throw parse_error("instance: '" + kind + "' line before 'p'");
            std::string a, b;
            if (!(ls >> a >> b)) throw parse_error("instance: bad '" + kind + "' line: " + line);
            std::string extra;
            if (ls >> extra) throw parse_error("instance: trailing tokens in line: " + line);
            int u = parse_vertex(a, n, line), v = parse_vertex(b, n, line);
            if (u == v) throw parse_error("instance: self-loop in line: " + line);
            if (u > v) std::swap(u, v);
            if (kind == "e")
                edges.emplace_back(u, v);
            else if (kind == "s")
                s_edges.emplace_back(u, v);
            else
                t_edges.emplace_back(u, v);
        } else {
            throw parse_error("instance: unknown line kind '" + kind + "'");
        }
    }
    if (n < 0) throw parse_error("instance: missing 'p' line");
    if (static_cast<int>(edges.size()) != m)
        throw parse_error("instance: 'p' declares " + std::to_string(m) + " edges but " +
                          std::to_string(edges.size()) + " 'e' lines found");
    Instance inst;
    try {
        inst.g = Graph(n, edges);
    } catch (const precondition_error& e) {
        throw parse_error(std::string("instance: ") + e.what());
    }
    auto to_matching = [&](const std::vector<std::pair<int, int>>& list, const char* which) {
        std::vector<int> ids;
        for (auto [u, v] : list) {
            int e = inst.g.edge_between(u, v);
            if (e < 0)
                throw parse_error(std::string("instance: ") + which + " matching uses non-edge " +
                                  std::to_string(u + 1) + " " + std::to_string(v + 1));
            ids.push_back(e);
        }
        try {
            return Matching(inst.g, ids);
        } catch (const precondition_error& e) {
            throw parse_error(std::string("instance: ") + which + " matching invalid: " + e.what());
        }
    };
    if (s_edges.empty() && t_edges.empty()) return inst;
    if (s_edges.size() != t_edges.size())
        throw parse_error("instance: source and target matchings have different sizes (" +
                          std::to_string(s_edges.size()) + " vs " + std::to_string(t_edges.size()) + ")");
    inst.ms = to_matching(s_edges, "source");
    inst.mt = to_matching(t_edges, "target");
    return inst;
}

std::string serialize_instance(const Graph& g, const Matching* ms, const Matching* mt) {
    std::ostringstream out;
    out << "p " << g.n() << " " << g.m() << "\n";
    for (auto [u, v] : g.edges()) out << "e " << u + 1 << " " << v + 1 << "\n";
    auto dump = [&](const Matching& m, char kind) {
        for (int e : m.edge_ids()) {
            auto [u, v] = g.edge(e);
            out << kind << " " << u + 1 << " " << v + 1 << "\n";
        }
    };
    if (ms) dump(*ms, 's');
    if (mt) dump(*mt, 't');
    return out.str();
}

}  // namespace mj
