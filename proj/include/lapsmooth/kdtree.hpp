#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lapsmooth/common.hpp"

namespace lapsmooth {

// Axis-aligned binary space partition over a PointCloud. Nodes split the
// widest box extent at the median; leaves hold up to 16 points. Radius
// queries must return exactly the index set {j : |x_i - x_j| <= r}, so box
// pruning is made conservative and the final test reuses squared_distance,
// the same routine the exhaustive path uses.
class KdTree {
public:
    static constexpr std::size_t kLeafSize = 16;

    explicit KdTree(const PointCloud& pts) : pts_(&pts) {
        const std::size_t n = pts.n;
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = static_cast<std::uint32_t>(i);
        nodes_.reserve(2 * n / kLeafSize + 4);
        build(0, n);
    }

    /// Appends every j with |x_q - x_j| <= radius (including q itself) to out.
    void radius_query(std::size_t q, double radius, std::vector<std::uint32_t>& out) const {
        const double r2 = radius * radius;
        const double prune2 = r2 * (1.0 + 1e-12);  // slack admits extra leaves, never loses pairs
        radius_rec(0, q, r2, prune2, out);
    }

    /// Nearest design point to an arbitrary query location; ties broken by
    /// lowest index.
    std::size_t nearest(const double* x) const {
        double best_d2 = std::numeric_limits<double>::infinity();
        std::uint32_t best = 0;
        nearest_rec(0, x, best_d2, best);
        return best;
    }

private:
    struct Node {
        std::uint32_t lo, hi;          // range in perm_
        std::int32_t left = -1, right = -1;
        std::vector<double> box_min, box_max;
        bool leaf() const { return left < 0; }
    };

    std::int32_t build(std::size_t lo, std::size_t hi) {
        const int d = pts_->d;
        Node node;
        node.lo = static_cast<std::uint32_t>(lo);
        node.hi = static_cast<std::uint32_t>(hi);
        node.box_min.assign(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
        node.box_max.assign(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
        for (std::size_t i = lo; i < hi; ++i) {
            const double* p = pts_->row(perm_[i]);
            for (int k = 0; k < d; ++k) {
                node.box_min[static_cast<std::size_t>(k)] = std::min(node.box_min[static_cast<std::size_t>(k)], p[k]);
                node.box_max[static_cast<std::size_t>(k)] = std::max(node.box_max[static_cast<std::size_t>(k)], p[k]);
            }
        }
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(std::move(node));
        if (hi - lo <= kLeafSize) return id;

        int axis = 0;
        double widest = -1.0;
        for (int k = 0; k < d; ++k) {
            const double w = nodes_[static_cast<std::size_t>(id)].box_max[static_cast<std::size_t>(k)] -
                             nodes_[static_cast<std::size_t>(id)].box_min[static_cast<std::size_t>(k)];
            if (w > widest) {
                widest = w;
                axis = k;
            }
        }
        if (widest <= 0.0) return id;  // all points coincide

        const std::size_t mid = lo + (hi - lo) / 2;
        std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(lo),
                         perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                         perm_.begin() + static_cast<std::ptrdiff_t>(hi),
                         [&](std::uint32_t a, std::uint32_t b) {
                             return pts_->coord(a, axis) < pts_->coord(b, axis);
                         });
        const std::int32_t l = build(lo, mid);
        const std::int32_t r = build(mid, hi);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    double box_distance2(const Node& node, const double* x) const {
        double s = 0.0;
        for (int k = 0; k < pts_->d; ++k) {
            const double lo = node.box_min[static_cast<std::size_t>(k)];
            const double hi = node.box_max[static_cast<std::size_t>(k)];
            double gap = 0.0;
            if (x[k] < lo)
                gap = lo - x[k];
            else if (x[k] > hi)
                gap = x[k] - hi;
            s += gap * gap;
        }
        return s;
    }

    void radius_rec(std::int32_t id, std::size_t q, double r2, double prune2,
                    std::vector<std::uint32_t>& out) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        const double* x = pts_->row(q);
        if (box_distance2(node, x) > prune2) return;
        if (node.leaf()) {
            for (std::uint32_t i = node.lo; i < node.hi; ++i) {
                const std::uint32_t j = perm_[i];
                if (squared_distance(*pts_, q, j) <= r2) out.push_back(j);
            }
            return;
        }
        radius_rec(node.left, q, r2, prune2, out);
        radius_rec(node.right, q, r2, prune2, out);
    }

    void nearest_rec(std::int32_t id, const double* x, double& best_d2, std::uint32_t& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (box_distance2(node, x) > best_d2) return;  // keep equality: ties may hide here
        if (node.leaf()) {
            for (std::uint32_t i = node.lo; i < node.hi; ++i) {
                const std::uint32_t j = perm_[i];
                double d2 = 0.0;
                const double* p = pts_->row(j);
                for (int k = 0; k < pts_->d; ++k) {
                    const double diff = x[k] - p[k];
                    d2 += diff * diff;
                }
                if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
                    best_d2 = d2;
                    best = j;
                }
            }
            return;
        }
        const double dl = box_distance2(nodes_[static_cast<std::size_t>(node.left)], x);
        const double dr = box_distance2(nodes_[static_cast<std::size_t>(node.right)], x);
        if (dl <= dr) {
            nearest_rec(node.left, x, best_d2, best);
            nearest_rec(node.right, x, best_d2, best);
        } else {
            nearest_rec(node.right, x, best_d2, best);
            nearest_rec(node.left, x, best_d2, best);
        }
    }

    const PointCloud* pts_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;
};

}  // namespace lapsmooth
