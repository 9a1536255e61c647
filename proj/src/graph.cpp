#include "lowtail/graph.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lowtail {

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count) {
    if (vertex_count < 1) throw std::invalid_argument("Graph: need at least one vertex");
    std::set<std::pair<int, int>> canon;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loops are not allowed");
        canon.emplace(std::min(u, v), std::max(u, v));
    }
    if (canon.size() != edges.size())
        throw std::invalid_argument("Graph: repeated edge");
    edges_.assign(canon.begin(), canon.end());
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    auto e = std::make_pair(std::min(u, v), std::max(u, v));
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(vertex_count_, 0);
    for (auto [u, v] : edges_) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

int Graph::max_degree() const {
    auto deg = degrees();
    return *std::max_element(deg.begin(), deg.end());
}

bool Graph::is_bipartite() const {
    std::vector<std::vector<int>> adj(vertex_count_);
    for (auto [u, v] : edges_) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> colour(vertex_count_, -1);
    for (int s = 0; s < vertex_count_; ++s) {
        if (colour[s] != -1) continue;
        colour[s] = 0;
        std::queue<int> bfs;
        bfs.push(s);
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            for (int v : adj[u]) {
                if (colour[v] == -1) {
                    colour[v] = colour[u] ^ 1;
                    bfs.push(v);
                } else if (colour[v] == colour[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

Graph Graph::complete(int t) {
    if (t < 2) throw std::invalid_argument("complete: need t >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) edges.emplace_back(i, j);
    return Graph(t, std::move(edges));
}

Graph Graph::cycle(int t) {
    if (t < 3) throw std::invalid_argument("cycle: need t >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < t; ++i) edges.emplace_back(i, (i + 1) % t);
    return Graph(t, std::move(edges));
}

Graph Graph::path(int t) {
    if (t < 2) throw std::invalid_argument("path: need t >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < t; ++i) edges.emplace_back(i, i + 1);
    return Graph(t, std::move(edges));
}

Graph Graph::star(int leaves) {
    if (leaves < 1) throw std::invalid_argument("star: need at least one leaf");
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph(leaves + 1, std::move(edges));
}

Graph Graph::complete_bipartite(int s, int t) {
    if (s < 1 || t < 1) throw std::invalid_argument("complete_bipartite: need s,t >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) edges.emplace_back(i, s + j);
    return Graph(s + t, std::move(edges));
}

Graph Graph::from_family(const std::string& family, int size) {
    if (family == "complete") return complete(size);
    if (family == "cycle") return cycle(size);
    if (family == "path") return path(size);
    if (family == "star") return star(size);
    throw std::invalid_argument("unknown graph family: " + family);
}

Graph Graph::from_family(const std::string& family, int size_a, int size_b) {
    if (family == "biclique" || family == "complete_bipartite")
        return complete_bipartite(size_a, size_b);
    throw std::invalid_argument("unknown two-parameter graph family: " + family);
}

Graph Graph::parse_name(const std::string& name) {
    if (name.size() < 2) throw std::invalid_argument("unparseable graph name: " + name);
    char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    std::string rest = name.substr(1);
    auto parse_int = [&](const std::string& s) {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("unparseable graph name: " + name);
        return v;
    };
    auto comma = rest.find(',');
    if (kind == 'K' && comma != std::string::npos)
        return complete_bipartite(parse_int(rest.substr(0, comma)),
                                  parse_int(rest.substr(comma + 1)));
    switch (kind) {
        case 'K': return complete(parse_int(rest));
        case 'C': return cycle(parse_int(rest));
        case 'P': return path(parse_int(rest));
        case 'S': return star(parse_int(rest));
        default: throw std::invalid_argument("unparseable graph name: " + name);
    }
}

Graph Graph::from_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int max_label = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue; // blank line
        if (!(ls >> v)) throw std::invalid_argument("edge list: expected two labels per line");
        edges.emplace_back(u, v);
        max_label = std::max({max_label, u, v});
    }
    if (edges.empty()) throw std::invalid_argument("edge list: no edges");
    return Graph(max_label + 1, std::move(edges));
}

} // namespace lowtail
