#pragma once

// Combinatorics of ideal triangulations of cusped surfaces. Triangles
// carry three signed edge slots; every edge id appears exactly once
// forward and once backward (oriented gluing). Cusps are recovered by
// corner walks.

#include <array>
#include <string>
#include <vector>

namespace stretchline::surface {

struct SideRef {
    int tri = -1;
    int side = -1; // 0..2, side k runs from vertex k to vertex k+1 (mod 3)
    bool valid() const { return tri >= 0; }
};

struct Corner {
    int tri = -1;
    int vertex = -1; // 0..2
};

class IdealTriangulation {
public:
    struct Triangle {
        std::array<int, 3> edge{};  // 0-based edge ids
        std::array<bool, 3> fwd{};  // side traverses the edge forward?
    };

    // triangles given as triples of signed 1-based edge ids, e.g. the
    // once-punctured torus {{1,2,3},{-1,-2,-3}}.
    static IdealTriangulation from_signed_triples(
        const std::vector<std::array<int, 3>>& triples);
    static IdealTriangulation once_punctured_torus();

    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return num_edges_; }
    int num_cusps() const { return static_cast<int>(cusps_.size()); }
    int euler_characteristic() const { return num_triangles() - num_edges(); }

    const Triangle& triangle(int t) const { return triangles_[t]; }
    SideRef side_of_edge(int edge, bool fwd) const {
        return fwd ? edge_fwd_[edge] : edge_bwd_[edge];
    }
    // The side opposite to (tri, side) across their common edge.
    SideRef mate(int tri, int side) const;

    const std::vector<std::vector<Corner>>& cusps() const { return cusps_; }

    // Sum over the edge ends incident to the cusp of the edge shear.
    double cusp_shear_sum(int cusp, const std::vector<double>& shears) const;

private:
    void validate_and_index();

    std::vector<Triangle> triangles_;
    int num_edges_ = 0;
    std::vector<SideRef> edge_fwd_;
    std::vector<SideRef> edge_bwd_;
    std::vector<std::vector<Corner>> cusps_;
};

} // namespace stretchline::surface
