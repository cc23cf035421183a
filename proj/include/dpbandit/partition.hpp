#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dpbandit/context.hpp"

namespace dpbandit {

// One hypercube cell of a learner's partition. A cell at level l has side
// m^-l and spans [cell[j]*m^-l, (cell[j]+1)*m^-l) per dimension, closed at
// the upper boundary when the cell touches 1.
struct SubspaceId {
    int level = 0;
    std::vector<std::int64_t> cell;

    bool operator==(const SubspaceId& other) const = default;
};

struct SubspaceIdHash {
    std::size_t operator()(const SubspaceId& id) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(id.level);
        for (std::int64_t c : id.cell) {
            h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

enum class SplitDecision { NoSplit, Split };

// Adaptive partition of [0,1]^d into hypercubes. Cells are refined (split
// into m^d children) once they have collected A*m^(p*l) arrivals. The active
// set is stored implicitly as the frontier below recorded split events, so
// children cost nothing until first touched.
class PartitionTree {
  public:
    PartitionTree(int m, int d, double split_constant, double split_exponent);

    // Returns the unique active leaf containing x. Coordinates equal to 1.0
    // map into the topmost cell of each dimension.
    SubspaceId locate(const ContextVector& x) const;

    // Counts one arrival in c and reports whether the split threshold
    // ceil(A*m^(p*l)) has been reached. The caller is expected to follow a
    // Split decision with split(c).
    SplitDecision record_arrival(const SubspaceId& c);

    // Replaces active cell c by its m^d level-(l+1) children, returned in
    // lexicographic cell order. Child arrival counts start at zero.
    std::vector<SubspaceId> split(const SubspaceId& c);

    bool is_active(const SubspaceId& c) const;
    bool contains(const SubspaceId& c, const ContextVector& x) const;

    std::int64_t arrivals(const SubspaceId& c) const;
    std::int64_t split_threshold(int level) const;

    // Enumerates the current leaves. Walks the split record; meant for
    // tests and reporting, not hot paths.
    std::vector<SubspaceId> active_leaves() const;

    int max_level() const { return max_level_; }
    int branching() const { return m_; }
    int dimension() const { return d_; }

    // Pre-splits every cell down to the given level (uniform grid). Used by
    // the fixed-partition baseline.
    void split_uniformly_to_level(int level);

    static SubspaceId root(int d) { return SubspaceId{0, std::vector<std::int64_t>(d, 0)}; }

  private:
    SubspaceId child_containing(const SubspaceId& parent, const ContextVector& x) const;
    SubspaceId parent_of(const SubspaceId& c) const;

    int m_;
    int d_;
    double split_constant_;   // A
    double split_exponent_;   // p
    int max_level_ = 0;
    std::unordered_set<SubspaceId, SubspaceIdHash> split_;
    std::unordered_map<SubspaceId, std::int64_t, SubspaceIdHash> arrivals_;
};

}  // namespace dpbandit
