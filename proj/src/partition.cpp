#include "dpbandit/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpbandit {

PartitionTree::PartitionTree(int m, int d, double split_constant, double split_exponent)
    : m_(m), d_(d), split_constant_(split_constant), split_exponent_(split_exponent) {
    if (m < 2) throw std::invalid_argument("branching factor m must be >= 2");
    if (d < 1 || d > 8) throw std::invalid_argument("dimension d must be in [1,8]");
    if (!(split_constant > 0.0)) throw std::invalid_argument("partition constant A must be > 0");
    if (!(split_exponent > 0.0)) throw std::invalid_argument("partition exponent p must be > 0");
}

SubspaceId PartitionTree::locate(const ContextVector& x) const {
    validate_context(x, d_);
    SubspaceId id = root(d_);
    while (split_.count(id) > 0) {
        id = child_containing(id, x);
    }
    return id;
}

SubspaceId PartitionTree::child_containing(const SubspaceId& parent, const ContextVector& x) const {
    SubspaceId child;
    child.level = parent.level + 1;
    child.cell.resize(d_);
    const double scale = std::pow(static_cast<double>(m_), child.level);
    for (int j = 0; j < d_; ++j) {
        std::int64_t lo = parent.cell[j] * m_;
        std::int64_t g = static_cast<std::int64_t>(std::floor(x[j] * scale));
        // Clamp into the parent's child range; keeps the walk structurally
        // consistent when x sits on a floating-point cell boundary or at 1.0.
        child.cell[j] = std::clamp(g, lo, lo + m_ - 1);
    }
    return child;
}

SubspaceId PartitionTree::parent_of(const SubspaceId& c) const {
    SubspaceId p;
    p.level = c.level - 1;
    p.cell.resize(d_);
    for (int j = 0; j < d_; ++j) {
        std::int64_t v = c.cell[j];
        p.cell[j] = (v >= 0 ? v / m_ : -((-v + m_ - 1) / m_));
    }
    return p;
}

bool PartitionTree::is_active(const SubspaceId& c) const {
    if (static_cast<int>(c.cell.size()) != d_ || c.level < 0) return false;
    if (split_.count(c) > 0) return false;
    if (c.level == 0) return split_.empty() || split_.count(root(d_)) == 0;
    return split_.count(parent_of(c)) > 0;
}

bool PartitionTree::contains(const SubspaceId& c, const ContextVector& x) const {
    const double side = std::pow(static_cast<double>(m_), -c.level);
    const std::int64_t cells_per_dim = static_cast<std::int64_t>(std::llround(std::pow(m_, c.level)));
    for (int j = 0; j < d_; ++j) {
        double lo = static_cast<double>(c.cell[j]) * side;
        double hi = static_cast<double>(c.cell[j] + 1) * side;
        bool top = (c.cell[j] + 1 == cells_per_dim);
        if (x[j] < lo) return false;
        if (top ? x[j] > 1.0 : x[j] >= hi) return false;
    }
    return true;
}

std::int64_t PartitionTree::split_threshold(int level) const {
    double raw = split_constant_ * std::pow(static_cast<double>(m_), split_exponent_ * level);
    // Small downward nudge so exact-integer thresholds survive fp rounding.
    return static_cast<std::int64_t>(std::ceil(raw - 1e-9));
}

SplitDecision PartitionTree::record_arrival(const SubspaceId& c) {
    if (!is_active(c)) throw std::logic_error("record_arrival on inactive subspace");
    std::int64_t count = ++arrivals_[c];
    return count >= split_threshold(c.level) ? SplitDecision::Split : SplitDecision::NoSplit;
}

std::int64_t PartitionTree::arrivals(const SubspaceId& c) const {
    auto it = arrivals_.find(c);
    return it == arrivals_.end() ? 0 : it->second;
}

std::vector<SubspaceId> PartitionTree::split(const SubspaceId& c) {
    if (!is_active(c)) throw std::logic_error("split on inactive subspace");
    split_.insert(c);
    arrivals_.erase(c);
    max_level_ = std::max(max_level_, c.level + 1);

    std::vector<SubspaceId> children;
    std::int64_t count = 1;
    for (int j = 0; j < d_; ++j) count *= m_;
    children.reserve(count);

    std::vector<std::int64_t> digits(d_, 0);
    for (std::int64_t i = 0; i < count; ++i) {
        SubspaceId child;
        child.level = c.level + 1;
        child.cell.resize(d_);
        for (int j = 0; j < d_; ++j) child.cell[j] = c.cell[j] * m_ + digits[j];
        children.push_back(std::move(child));
        for (int j = d_ - 1; j >= 0; --j) {
            if (++digits[j] < m_) break;
            digits[j] = 0;
        }
    }
    return children;
}

std::vector<SubspaceId> PartitionTree::active_leaves() const {
    std::vector<SubspaceId> leaves;
    std::vector<SubspaceId> stack{root(d_)};
    while (!stack.empty()) {
        SubspaceId id = std::move(stack.back());
        stack.pop_back();
        if (split_.count(id) == 0) {
            leaves.push_back(std::move(id));
            continue;
        }
        std::vector<std::int64_t> digits(d_, 0);
        std::int64_t count = 1;
        for (int j = 0; j < d_; ++j) count *= m_;
        for (std::int64_t i = 0; i < count; ++i) {
            SubspaceId child;
            child.level = id.level + 1;
            child.cell.resize(d_);
            for (int j = 0; j < d_; ++j) child.cell[j] = id.cell[j] * m_ + digits[j];
            stack.push_back(std::move(child));
            for (int j = d_ - 1; j >= 0; --j) {
                if (++digits[j] < m_) break;
                digits[j] = 0;
            }
        }
    }
    return leaves;
}

void PartitionTree::split_uniformly_to_level(int level) {
    for (int l = 0; l < level; ++l) {
        for (const SubspaceId& leaf : active_leaves()) {
            if (leaf.level == l) split(leaf);
        }
    }
}

}  // namespace dpbandit
