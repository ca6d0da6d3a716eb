#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsparse/error.hpp"
#include "gsparse/mesh.hpp"
#include "parallel.hpp"

namespace gsparse {

namespace {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return a;
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    // Interior: project onto the plane. Recovering barycentrics from va/vb/vc
    // loses accuracy on the slivers marching cubes produces.
    const Vec3 n = ab.cross(ac);
    const double nn = n.squaredNorm();
    if (nn == 0.0) {
        const double denom = 1.0 / (va + vb + vc);
        return a + ab * (vb * denom) + ac * (vc * denom);
    }
    return p - n * (n.dot(ap) / nn);
}

struct Aabb {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
    void grow(const Vec3& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double sq_distance(const Vec3& p) const {
        const Vec3 d = (lo - p).cwiseMax(p - hi).cwiseMax(0.0);
        return d.squaredNorm();
    }
};

// Median-split bounding volume hierarchy over the triangles of one mesh.
class TriangleTree {
public:
    explicit TriangleTree(const TriMesh& mesh) : mesh_(mesh), order_(mesh.triangles.size()) {
        std::iota(order_.begin(), order_.end(), 0u);
        centroid_.reserve(order_.size());
        for (const auto& t : mesh.triangles)
            centroid_.push_back((mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0);
        nodes_.reserve(2 * order_.size() / kLeaf + 2);
        nodes_.resize(1);
        fill(0, 0, order_.size());
    }

    double sq_distance(const Vec3& p) const {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            if (node.box.sq_distance(p) >= best) continue;
            if (node.count > 0) {
                for (std::uint32_t s = node.first; s < node.first + node.count; ++s) {
                    const auto& t = mesh_.triangles[order_[s]];
                    const Vec3 q = closest_on_triangle(p, mesh_.vertices[t[0]], mesh_.vertices[t[1]],
                                                       mesh_.vertices[t[2]]);
                    best = std::min(best, (q - p).squaredNorm());
                }
                continue;
            }
            // Visit the nearer child first.
            const std::uint32_t l = node.first, r = node.first + 1;
            const bool left_first = nodes_[l].box.sq_distance(p) <= nodes_[r].box.sq_distance(p);
            stack[top++] = left_first ? r : l;
            stack[top++] = left_first ? l : r;
        }
        return best;
    }

private:
    static constexpr std::size_t kLeaf = 4;

    struct Node {
        Aabb box;
        std::uint32_t first = 0;  // leaf: first slot in order_; inner: left child index
        std::uint32_t count = 0;  // 0 for inner nodes
    };

    void fill(std::uint32_t id, std::size_t begin, std::size_t end) {
        Aabb box, cbox;
        for (std::size_t s = begin; s < end; ++s) {
            const auto& t = mesh_.triangles[order_[s]];
            for (int v = 0; v < 3; ++v) box.grow(mesh_.vertices[t[v]]);
            cbox.grow(centroid_[order_[s]]);
        }
        nodes_[id].box = box;
        if (end - begin <= kLeaf) {
            nodes_[id].first = static_cast<std::uint32_t>(begin);
            nodes_[id].count = static_cast<std::uint32_t>(end - begin);
            return;
        }
        int axis = 0;
        (cbox.hi - cbox.lo).maxCoeff(&axis);
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t x, std::uint32_t y) {
                             if (centroid_[x][axis] != centroid_[y][axis]) return centroid_[x][axis] < centroid_[y][axis];
                             return x < y;
                         });
        // Children are allocated back to back, so the right child is left + 1.
        const std::uint32_t left = static_cast<std::uint32_t>(nodes_.size());
        nodes_.resize(left + 2);
        nodes_[id].first = left;
        nodes_[id].count = 0;
        fill(left, begin, mid);
        fill(left + 1, mid, end);
    }

    const TriMesh& mesh_;
    std::vector<std::uint32_t> order_;
    std::vector<Vec3> centroid_;
    std::vector<Node> nodes_;
};

double radical_inverse(std::uint32_t i, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * (i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

std::vector<Vec3> surface_samples(const TriMesh& mesh, int per_triangle) {
    std::vector<Vec3> out(mesh.vertices);
    out.reserve(mesh.vertices.size() + mesh.triangles.size() * per_triangle);
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        for (int s = 1; s <= per_triangle; ++s) {
            // Halton (2, 3) pair mapped uniformly onto the triangle.
            const double su = std::sqrt(radical_inverse(s, 2));
            const double v = radical_inverse(s, 3);
            out.push_back((1.0 - su) * a + su * (1.0 - v) * b + su * v * c);
        }
    }
    return out;
}

}  // namespace

double directed_hausdorff(const TriMesh& from, const TriMesh& to, int samples_per_triangle, const ExecPolicy& policy) {
    if (from.empty() || to.empty()) throw Error(ErrorKind::EmptyMesh, "Hausdorff distance of an empty mesh");
    require(samples_per_triangle >= 0, "samples per triangle must be non-negative");
    const TriangleTree tree(to);
    const std::vector<Vec3> samples = surface_samples(from, samples_per_triangle);
    const std::size_t blocks = detail::block_count(samples.size(), policy);
    std::vector<double> worst(blocks, 0.0);
    detail::for_each_block(samples.size(), policy, [&](std::size_t blk, std::size_t begin, std::size_t end) {
        double m = 0.0;
        for (std::size_t s = begin; s < end; ++s) m = std::max(m, tree.sq_distance(samples[s]));
        worst[blk] = m;
    });
    return std::sqrt(*std::max_element(worst.begin(), worst.end()));
}

double hausdorff(const TriMesh& a, const TriMesh& b, int samples_per_triangle, const ExecPolicy& policy) {
    return std::max(directed_hausdorff(a, b, samples_per_triangle, policy),
                    directed_hausdorff(b, a, samples_per_triangle, policy));
}

}  // namespace gsparse
