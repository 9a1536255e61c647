#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lowtail {

// Finite simple graph H. Vertices are labelled 0..v-1 and edges are stored as
// canonical (min, max) pairs in sorted order, so enumeration over edges is
// deterministic. Immutable after construction.
class Graph {
public:
    Graph(int vertex_count, std::vector<std::pair<int, int>> edges);

    int vertex_count() const noexcept { return vertex_count_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

    bool has_edge(int u, int v) const;
    std::vector<int> degrees() const;
    int max_degree() const;

    // True iff the graph contains no odd cycle (BFS 2-colouring).
    bool is_bipartite() const;

    static Graph complete(int t);            // K_t, t >= 2
    static Graph cycle(int t);               // C_t, t >= 3
    static Graph path(int t);                // P_t on t vertices, t >= 2
    static Graph star(int leaves);           // K_{1,leaves}, leaves >= 1
    static Graph complete_bipartite(int s, int t); // K_{s,t}

    // Named constructors: family in {"complete","cycle","path","star"} with one
    // size, or {"biclique","complete_bipartite"} with two.
    static Graph from_family(const std::string& family, int size);
    static Graph from_family(const std::string& family, int size_a, int size_b);

    // Compact names for the command line: "K3", "C5", "P4", "S2", "K2,3".
    static Graph parse_name(const std::string& name);

    // Edge-list text: one "u v" pair per line; vertex count is max label + 1.
    static Graph from_edge_list(std::istream& in);

private:
    int vertex_count_;
    std::vector<std::pair<int, int>> edges_;
};

} // namespace lowtail
