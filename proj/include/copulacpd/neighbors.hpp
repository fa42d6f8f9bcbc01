#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "copulacpd/core.hpp"

namespace copulacpd {

struct Neighbor {
    std::size_t index;
    double distance;

    bool operator==(const Neighbor&) const = default;
};

/// Exact Euclidean k-nearest-neighbour index over a fixed point cloud.
///
/// Results are ordered by (distance, original index): ties at equal distance go to the lower
/// index, and a query that coincides with a stored point returns that point at distance 0.
/// A kd-tree is used when the cloud is large and low-dimensional; otherwise queries scan
/// every point. Both paths produce identical answers. Queries are const and thread-safe.
class NeighborIndex {
public:
    static constexpr std::size_t kBruteForceBelow = 64;
    static constexpr std::size_t kMaxTreeDim = 16;
    static constexpr std::size_t kLeafSize = 12;

    explicit NeighborIndex(const Matrix& points);

    std::size_t size() const noexcept { return m_; }
    std::size_t dim() const noexcept { return d_; }
    bool uses_tree() const noexcept { return !nodes_.empty(); }

    std::vector<Neighbor> query(std::span<const double> z, std::size_t k) const;

    /// Hot-path variant writing k sorted neighbours into `out` (resized), reusing its storage.
    void query_into(std::span<const double> z, std::size_t k, std::vector<Neighbor>& out) const;

private:
    struct Node {
        std::uint32_t begin;
        std::uint32_t end;
        std::int32_t left;   // -1 for leaves
        std::int32_t right;
        std::uint32_t dim;
        double split;
    };
    // (squared distance, original index), max-heap on this order
    using Candidate = std::pair<double, std::size_t>;

    std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const double* q, std::size_t k, std::vector<Candidate>& heap) const;
    void scan_range(std::uint32_t begin, std::uint32_t end, const double* q, std::size_t k,
                    std::vector<Candidate>& heap) const;

    std::size_t m_;
    std::size_t d_;
    std::vector<double> coords_;      // points in tree order, row-major
    std::vector<std::size_t> order_;  // tree position -> original index
    std::vector<Node> nodes_;
};

/// Reference scan over all points under the same ordering rule.
std::vector<Neighbor> brute_force_knn(const Matrix& points, std::span<const double> z, std::size_t k);

}  // namespace copulacpd
