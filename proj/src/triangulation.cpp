#include "stretchline/triangulation.hpp"
#include "stretchline/error.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

namespace stretchline::surface {

IdealTriangulation IdealTriangulation::from_signed_triples(
    const std::vector<std::array<int, 3>>& triples) {
    IdealTriangulation tri;
    int max_edge = 0;
    for (const auto& t : triples) {
        Triangle tr;
        for (int k = 0; k < 3; ++k) {
            if (t[k] == 0) throw combinatorics_error("edge ids are signed and 1-based");
            tr.edge[k] = std::abs(t[k]) - 1;
            tr.fwd[k] = t[k] > 0;
            max_edge = std::max(max_edge, std::abs(t[k]));
        }
        tri.triangles_.push_back(tr);
    }
    tri.num_edges_ = max_edge;
    tri.validate_and_index();
    return tri;
}

IdealTriangulation IdealTriangulation::once_punctured_torus() {
    return from_signed_triples({{1, 2, 3}, {-1, -2, -3}});
}

SideRef IdealTriangulation::mate(int tri, int side) const {
    const Triangle& t = triangles_[tri];
    return side_of_edge(t.edge[side], !t.fwd[side]);
}

void IdealTriangulation::validate_and_index() {
    edge_fwd_.assign(num_edges_, SideRef{});
    edge_bwd_.assign(num_edges_, SideRef{});
    for (int i = 0; i < num_triangles(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const Triangle& t = triangles_[i];
            SideRef& slot = t.fwd[k] ? edge_fwd_[t.edge[k]] : edge_bwd_[t.edge[k]];
            if (slot.valid())
                throw combinatorics_error("edge side used twice with the same orientation");
            slot = {i, k};
        }
    }
    for (int e = 0; e < num_edges_; ++e) {
        if (!edge_fwd_[e].valid() || !edge_bwd_[e].valid())
            throw combinatorics_error("every edge needs one forward and one backward side");
    }
    // each edge has exactly two sides
    if (3 * num_triangles() != 2 * num_edges_)
        throw combinatorics_error("side count mismatch: need 3T = 2E");
    if (euler_characteristic() >= 0)
        throw combinatorics_error("Euler characteristic must be negative");

    // Corner walks. From corner (T, v), cross the side starting at v;
    // the image of v in the neighbor is the head of the mate side.
    std::set<std::pair<int, int>> seen;
    cusps_.clear();
    for (int i = 0; i < num_triangles(); ++i) {
        for (int v = 0; v < 3; ++v) {
            if (seen.count({i, v})) continue;
            std::vector<Corner> walk;
            int ct = i, cv = v;
            int guard = 0;
            do {
                if (seen.count({ct, cv}))
                    throw combinatorics_error("corner walk collision: invalid gluing");
                seen.insert({ct, cv});
                walk.push_back({ct, cv});
                const SideRef m = mate(ct, cv); // crossing side cv (starts at vertex cv)
                ct = m.tri;
                cv = (m.side + 1) % 3;
                if (++guard > 6 * num_triangles())
                    throw combinatorics_error("corner walk does not close");
            } while (!(ct == i && cv == v));
            cusps_.push_back(std::move(walk));
        }
    }
}

double IdealTriangulation::cusp_shear_sum(int cusp, const std::vector<double>& shears) const {
    if (static_cast<int>(shears.size()) != num_edges_)
        throw combinatorics_error("shear vector size mismatch");
    double sum = 0.0;
    for (const Corner& c : cusps_[cusp]) {
        // crossing the side that starts at the corner's vertex
        sum += shears[triangles_[c.tri].edge[c.vertex]];
    }
    return sum;
}

} // namespace stretchline::surface
