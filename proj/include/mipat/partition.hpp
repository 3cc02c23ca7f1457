#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mipat/counting.hpp"
#include "mipat/error.hpp"

namespace mipat {

/**
 * A set partition of {1..n}, stored as a restricted-growth string: element 0
 * is in block 0 and every later element's block id is at most one more than
 * the largest id seen so far. The encoding is canonical, so equality,
 * ordering and hashing work directly on the label vector.
 *
 * Elements are 0-based in the API and 1-based in the text format.
 */
class Partition {
public:
    Partition() = default;

    /// Builds a partition from arbitrary block labels (any integers); equal
    /// labels mean "same block". The result is relabelled canonically.
    static Partition from_labels(std::span<const int> labels) {
        if (labels.empty()) throw invalid_input("partition of an empty ground set");
        Partition p;
        p.labels_.resize(labels.size());
        std::vector<std::pair<int, int>> seen;
        int next = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto it = std::find_if(seen.begin(), seen.end(), [&](auto& e) { return e.first == labels[i]; });
            if (it == seen.end()) {
                seen.emplace_back(labels[i], next);
                p.labels_[i] = next++;
            } else {
                p.labels_[i] = it->second;
            }
        }
        p.blocks_ = next;
        return p;
    }

    static Partition from_labels(std::initializer_list<int> labels) {
        return from_labels(std::span<const int>(labels.begin(), labels.size()));
    }

    /// The single-block partition 1...n (top of the lattice).
    static Partition one_block(std::size_t n) {
        if (n == 0) throw invalid_input("partition of an empty ground set");
        Partition p;
        p.labels_.assign(n, 0);
        p.blocks_ = 1;
        return p;
    }

    /// The all-singletons partition 1|2|...|n (bottom of the lattice).
    static Partition singletons(std::size_t n) {
        if (n == 0) throw invalid_input("partition of an empty ground set");
        Partition p;
        p.labels_.resize(n);
        std::iota(p.labels_.begin(), p.labels_.end(), 0);
        p.blocks_ = static_cast<int>(n);
        return p;
    }

    std::size_t size() const { return labels_.size(); }
    std::size_t block_count() const { return static_cast<std::size_t>(blocks_); }
    int block_of(std::size_t element) const { return labels_.at(element); }
    std::span<const int> labels() const { return labels_; }

    bool same_block(std::size_t i, std::size_t j) const { return labels_[i] == labels_[j]; }

    /// Blocks as sorted element lists, ordered by least element.
    std::vector<std::vector<std::size_t>> blocks() const {
        std::vector<std::vector<std::size_t>> out(block_count());
        for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.labels_ <=> b.labels_; }

private:
    std::vector<int> labels_;
    int blocks_ = 0;
};

/**
 * A two-block partition a | (N \ a). `members` is the bitmask of the block
 * containing element 0 (bit i <=> element i), which makes the value
 * canonical. Limited to n <= 32.
 */
class Bipartition {
public:
    static constexpr std::size_t max_size = 32;

    Bipartition() = default;

    Bipartition(std::size_t n, std::uint32_t members) : n_(n), members_(members) {
        if (n < 2 || n > max_size)
            throw invalid_input("bipartition size must be in [2, 32], got " + std::to_string(n));
        if ((members & 1u) == 0) throw invalid_input("bipartition members must contain element 1");
        if (members == full_mask(n) || (n < 32 && (members >> n) != 0))
            throw invalid_input("bipartition members must be a proper subset of {1..n}");
    }

    /// Accepts a two-block partition; throws if p does not have exactly two blocks.
    static Bipartition from_partition(const Partition& p) {
        if (p.block_count() != 2) throw invalid_input("not a bipartition: " + std::to_string(p.block_count()) + " blocks");
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p.block_of(i) == 0) mask |= (1u << i);
        return Bipartition(p.size(), mask);
    }

    std::size_t size() const { return n_; }
    std::uint32_t members() const { return members_; }
    std::uint32_t complement() const { return full_mask(n_) & ~members_; }
    bool contains(std::size_t element) const { return (members_ >> element) & 1u; }

    std::size_t first_size() const { return static_cast<std::size_t>(std::popcount(members_)); }
    std::size_t second_size() const { return n_ - first_size(); }

    std::vector<std::size_t> first_block() const { return elements(members_); }
    std::vector<std::size_t> second_block() const { return elements(complement()); }

    Partition as_partition() const {
        std::vector<int> labels(n_);
        for (std::size_t i = 0; i < n_; ++i) labels[i] = contains(i) ? 0 : 1;
        return Partition::from_labels(labels);
    }

    static constexpr std::uint32_t full_mask(std::size_t n) {
        return n >= 32 ? 0xFFFFFFFFu : ((1u << n) - 1u);
    }

    friend bool operator==(const Bipartition&, const Bipartition&) = default;
    friend auto operator<=>(const Bipartition& a, const Bipartition& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.members_ <=> b.members_;
    }

private:
    std::vector<std::size_t> elements(std::uint32_t mask) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            if ((mask >> i) & 1u) out.push_back(i);
        return out;
    }

    std::size_t n_ = 0;
    std::uint32_t members_ = 0;
};

// ---------------------------------------------------------------------------
// Lattice operations

namespace detail {

inline void require_same_size(const Partition& p, const Partition& q) {
    if (p.size() != q.size()) throw dimension_mismatch(p.size(), q.size());
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

    std::vector<std::size_t> parent;
};

} // namespace detail

/// Greatest lower bound: i and j share a block iff they do in both p and q.
inline Partition meet(const Partition& p, const Partition& q) {
    detail::require_same_size(p, q);
    const std::size_t n = p.size();
    // Pair (p-block, q-block) identifies a block of the meet.
    std::vector<int> labels(n);
    const int width = static_cast<int>(q.block_count());
    for (std::size_t i = 0; i < n; ++i) labels[i] = p.block_of(i) * width + q.block_of(i);
    return Partition::from_labels(labels);
}

/// Least upper bound: connected components of the union of both block
/// equivalences.
inline Partition join(const Partition& p, const Partition& q) {
    detail::require_same_size(p, q);
    const std::size_t n = p.size();
    detail::DisjointSets sets(n);
    std::vector<std::size_t> first_p(p.block_count(), n), first_q(q.block_count(), n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& fp = first_p[p.block_of(i)];
        if (fp == n) fp = i; else sets.unite(fp, i);
        auto& fq = first_q[q.block_of(i)];
        if (fq == n) fq = i; else sets.unite(fq, i);
    }
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(sets.find(i));
    return Partition::from_labels(labels);
}

/// True iff every block of p lies inside a block of q (p <= q).
inline bool is_refinement(const Partition& p, const Partition& q) {
    detail::require_same_size(p, q);
    std::vector<int> target(p.block_count(), -1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        int& t = target[p.block_of(i)];
        if (t < 0) t = q.block_of(i);
        else if (t != q.block_of(i)) return false;
    }
    return true;
}

/// Meet of a nonempty collection. Throws on an empty range; callers that
/// want the "empty meet is the top" convention handle it themselves.
inline Partition meet_all(std::span<const Partition> ps) {
    if (ps.empty()) throw invalid_input("meet_all of an empty collection");
    Partition acc = ps.front();
    for (const auto& p : ps.subspan(1)) acc = meet(acc, p);
    return acc;
}

inline Partition meet_all(std::span<const Bipartition> bs) {
    if (bs.empty()) throw invalid_input("meet_all of an empty collection");
    // Two elements stay together iff every bipartition puts them on the same
    // side, i.e. their membership signatures agree.
    const std::size_t n = bs.front().size();
    std::vector<std::vector<bool>> signature(n, std::vector<bool>(bs.size()));
    for (std::size_t t = 0; t < bs.size(); ++t) {
        if (bs[t].size() != n) throw dimension_mismatch(n, bs[t].size());
        for (std::size_t i = 0; i < n; ++i) signature[i][t] = bs[t].contains(i);
    }
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(i);
        for (std::size_t j = 0; j < i; ++j)
            if (signature[j] == signature[i]) {
                labels[i] = labels[j];
                break;
            }
    }
    return Partition::from_labels(labels);
}

// ---------------------------------------------------------------------------
// Enumeration

/// All 2^(n-1) - 1 bipartitions of {1..n}, ascending by member bitmask.
inline std::vector<Bipartition> enumerate_bipartitions(std::size_t n) {
    if (n < 2 || n > Bipartition::max_size)
        throw invalid_input("enumerate_bipartitions: n must be in [2, 32], got " + std::to_string(n));
    const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
    std::vector<Bipartition> out;
    out.reserve(count);
    for (std::uint64_t free = 0; free < count; ++free)
        out.emplace_back(n, static_cast<std::uint32_t>((free << 1) | 1u));
    return out;
}

namespace detail {

/// Calls visit(labels, block_count) for every restricted-growth string of
/// length n, in lexicographic order.
template <typename Visit>
void for_each_rgs(std::size_t n, Visit&& visit) {
    std::vector<int> a(n, 0), prefix_max(n, 0);
    while (true) {
        visit(std::span<const int>(a), prefix_max[n - 1] + 1);
        std::size_t i = n - 1;
        while (i > 0 && a[i] == prefix_max[i - 1] + 1) --i;
        if (i == 0) return;
        ++a[i];
        prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            a[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

} // namespace detail

/// Every partition of {1..n} (Bell(n) of them), lexicographic in the
/// restricted-growth encoding. Capped at n <= 10.
inline std::vector<Partition> enumerate_partitions(std::size_t n) {
    if (n < 1 || n > 10) throw invalid_input("enumerate_partitions: n must be in [1, 10], got " + std::to_string(n));
    std::vector<Partition> out;
    out.reserve(bell_number(static_cast<unsigned>(n)));
    detail::for_each_rgs(n, [&](std::span<const int> a, int) { out.push_back(Partition::from_labels(a)); });
    return out;
}

/**
 * The bipartitions entailed by a finest independence pattern: every way of
 * splitting mu's k blocks into two nonempty groups, merged within each
 * group. Exactly 2^(k-1) - 1 results, ascending by bitmask.
 */
inline std::vector<Bipartition> entailed_dichotomies(const Partition& mu) {
    const std::size_t k = mu.block_count();
    const std::size_t n = mu.size();
    if (k <= 1) return {};
    if (n > Bipartition::max_size)
        throw invalid_input("entailed_dichotomies: n must be <= 32, got " + std::to_string(n));
    std::vector<std::uint32_t> block_mask(k, 0);
    for (std::size_t i = 0; i < n; ++i) block_mask[mu.block_of(i)] |= (1u << i);
    std::vector<Bipartition> out;
    const std::uint64_t count = (std::uint64_t{1} << (k - 1)) - 1;
    out.reserve(count);
    for (std::uint64_t free = 0; free < count; ++free) {
        const std::uint64_t group = (free << 1) | 1u;  // block 0 always in the first group
        std::uint32_t members = 0;
        for (std::size_t b = 0; b < k; ++b)
            if ((group >> b) & 1u) members |= block_mask[b];
        out.emplace_back(n, members);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All coarsenings of mu (partitions pi with mu <= pi); Bell(k) of them for
/// k blocks. Capped at k <= 12.
inline std::vector<Partition> enumerate_coarsenings(const Partition& mu) {
    const std::size_t k = mu.block_count();
    if (k > 12) throw invalid_input("enumerate_coarsenings: mu has " + std::to_string(k) + " blocks (max 12)");
    std::vector<Partition> out;
    out.reserve(bell_number(static_cast<unsigned>(k)));
    std::vector<int> labels(mu.size());
    detail::for_each_rgs(k, [&](std::span<const int> grouping, int) {
        for (std::size_t i = 0; i < mu.size(); ++i) labels[i] = grouping[mu.block_of(i)];
        out.push_back(Partition::from_labels(labels));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Text format
//
// Blocks separated by '|'. Inside a block, elements are 1-based decimal
// numbers separated by commas or whitespace. When the text has no commas,
// every block is a single token and there are at most nine digits in total,
// each token is read as a run of one-digit elements ("12|3|4"), which is how
// partitions with n <= 9 are written.

inline std::string format_partition(const Partition& p) {
    const bool digit_runs = p.size() <= 9;
    std::string out;
    bool first_block = true;
    for (const auto& block : p.blocks()) {
        if (!first_block) out += '|';
        first_block = false;
        bool first = true;
        for (std::size_t e : block) {
            if (!digit_runs && !first) out += ',';
            first = false;
            out += std::to_string(e + 1);
        }
    }
    return out;
}

inline std::string format_partition(const Bipartition& b) { return format_partition(b.as_partition()); }

/// Parses the text format. If `expected_size` is given the partition must
/// cover exactly {1..expected_size}; otherwise n is the number of elements.
inline Partition parse_partition(std::string_view text, std::optional<std::size_t> expected_size = std::nullopt) {
    auto fail = [&](const std::string& why) -> Partition {
        throw invalid_input("cannot parse partition '" + std::string(text) + "': " + why);
    };

    std::vector<std::vector<std::string>> blocks(1);
    std::vector<std::string>* tokens = &blocks.back();
    bool has_comma = false;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens->push_back(std::move(current));
        current.clear();
    };
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            current += c;
        } else if (c == ',') {
            has_comma = true;
            flush();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '|') {
            flush();
            blocks.emplace_back();
            tokens = &blocks.back();
        } else {
            return fail(std::string("unexpected character '") + c + "'");
        }
    }
    flush();

    bool numeric = has_comma;
    std::size_t digits = 0;
    for (const auto& b : blocks) {
        if (b.empty()) return fail("empty block");
        if (b.size() > 1) numeric = true;
        for (const auto& tok : b) digits += tok.size();
    }
    // A digit-run spelling has one digit per element, hence at most 9.
    if (digits > 9) numeric = true;

    std::vector<std::vector<std::size_t>> elements(blocks.size());
    std::size_t total = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (const auto& tok : blocks[b]) {
            if (numeric) {
                if (tok.size() > 9) return fail("element index too large: " + tok);
                std::size_t v = std::stoul(tok);
                if (v == 0) return fail("element indices are 1-based");
                elements[b].push_back(v);
            } else {
                for (char d : tok) {
                    if (d == '0') return fail("element indices are 1-based");
                    elements[b].push_back(static_cast<std::size_t>(d - '0'));
                }
            }
        }
        total += elements[b].size();
    }

    const std::size_t n = expected_size.value_or(total);
    if (n == 0) return fail("no elements");
    std::vector<int> labels(n, -1);
    for (std::size_t b = 0; b < elements.size(); ++b) {
        for (std::size_t v : elements[b]) {
            if (v > n) return fail("element " + std::to_string(v) + " outside 1.." + std::to_string(n));
            if (labels[v - 1] >= 0) return fail("duplicate element " + std::to_string(v));
            labels[v - 1] = static_cast<int>(b);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] < 0) return fail("missing element " + std::to_string(i + 1));
    return Partition::from_labels(labels);
}

inline Bipartition parse_bipartition(std::string_view text, std::optional<std::size_t> expected_size = std::nullopt) {
    return Bipartition::from_partition(parse_partition(text, expected_size));
}

} // namespace mipat

template <>
struct std::hash<mipat::Partition> {
    std::size_t operator()(const mipat::Partition& p) const noexcept {
        std::size_t h = p.size();
        for (int l : p.labels()) h = h * 1000003u ^ static_cast<std::size_t>(l);
        return h;
    }
};
