#include <gtest/gtest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "mipat/counting.hpp"
#include "mipat/partition.hpp"

using namespace mipat;

namespace {

Partition P(const char* s) { return parse_partition(s); }

Partition random_partition(std::size_t n, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> label(0, static_cast<int>(n) - 1);
    std::vector<int> labels(n);
    for (auto& l : labels) l = label(gen);
    return Partition::from_labels(labels);
}

// Relation-level oracles, independent of the label arithmetic in meet/join.
using Relation = std::vector<std::vector<bool>>;

Relation relation_of(const Partition& p) {
    Relation r(p.size(), std::vector<bool>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) r[i][j] = p.block_of(i) == p.block_of(j);
    return r;
}

Relation transitive_closure(Relation r) {
    const std::size_t n = r.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    return r;
}

} // namespace

TEST(Partition, CanonicalRelabelling) {
    const auto p = Partition::from_labels({7, 7, 3, 9});
    EXPECT_EQ(std::vector<int>(p.labels().begin(), p.labels().end()), (std::vector<int>{0, 0, 1, 2}));
    EXPECT_EQ(p.block_count(), 3u);
    EXPECT_EQ(p, P("12|3|4"));
    EXPECT_EQ(Partition::from_labels({5, 1, 5, 1}), P("13|24"));
}

TEST(Partition, MeetExamples) {
    EXPECT_EQ(meet(P("123|4"), P("124|3")), P("12|3|4"));
    EXPECT_EQ(meet(P("12|3|4"), P("12|34")), P("12|3|4"));
    const auto p = P("13|25|4|6");
    EXPECT_EQ(meet(p, p), p);
    EXPECT_EQ(meet(Partition::singletons(6), p), Partition::singletons(6));
}

TEST(Partition, JoinExamples) {
    EXPECT_EQ(join(P("12|3|4"), P("1|2|34")), P("12|34"));
    EXPECT_EQ(join(P("12|3|4"), P("1|23|4")), P("123|4"));
    const auto p = P("13|25|4|6");
    EXPECT_EQ(join(p, p), p);
    EXPECT_EQ(join(Partition::one_block(6), p), Partition::one_block(6));
}

TEST(Partition, RefinementExamples) {
    EXPECT_TRUE(is_refinement(P("1|23|45|6"), P("123|45|6")));
    EXPECT_TRUE(is_refinement(P("1|23|45|6"), P("1|2345|6")));
    EXPECT_TRUE(is_refinement(P("1|23|4|5|6"), P("1|23|45|6")));
    EXPECT_FALSE(is_refinement(P("123|45|6"), P("1|23|45|6")));
    EXPECT_TRUE(is_refinement(P("14|2|3"), P("14|2|3")));
}

TEST(Partition, DimensionMismatch) {
    EXPECT_THROW(meet(P("12|3"), P("12|34")), dimension_mismatch);
    EXPECT_THROW(join(P("12|3"), P("12|34")), dimension_mismatch);
    EXPECT_THROW(is_refinement(P("12|3"), P("12|34")), dimension_mismatch);
    std::vector<Partition> mixed{P("12|3"), P("12|34")};
    EXPECT_THROW(meet_all(mixed), dimension_mismatch);
}

TEST(Partition, MeetAll) {
    std::vector<Partition> ps{P("123|4"), P("124|3"), P("12|34")};
    EXPECT_EQ(meet_all(ps), P("12|3|4"));
    std::vector<Partition> one{P("12356|4")};
    EXPECT_EQ(meet_all(one), P("12356|4"));
    EXPECT_THROW(meet_all(std::span<const Partition>{}), invalid_input);

    std::vector<Partition> all;
    for (const auto& b : enumerate_bipartitions(4)) all.push_back(b.as_partition());
    ASSERT_EQ(all.size(), 7u);
    EXPECT_EQ(meet_all(all), Partition::singletons(4));
    EXPECT_EQ(meet_all(enumerate_bipartitions(4)), Partition::singletons(4));
}

TEST(Partition, LatticeLawsOnRandomTriples) {
    std::mt19937_64 gen(20240611);
    for (int trial = 0; trial < 12000; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto p = random_partition(n, gen), q = random_partition(n, gen), r = random_partition(n, gen);

        const auto m = meet(p, q);
        const auto j = join(p, q);
        // Oracles on the equivalence relations.
        const auto rp = relation_of(p), rq = relation_of(q);
        Relation both(n, std::vector<bool>(n)), either(n, std::vector<bool>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                both[a][b] = rp[a][b] && rq[a][b];
                either[a][b] = rp[a][b] || rq[a][b];
            }
        ASSERT_EQ(relation_of(m), both);
        ASSERT_EQ(relation_of(j), transitive_closure(either));

        ASSERT_EQ(m, meet(q, p));
        ASSERT_EQ(j, join(q, p));
        ASSERT_EQ(meet(meet(p, q), r), meet(p, meet(q, r)));
        ASSERT_EQ(join(join(p, q), r), join(p, join(q, r)));
        ASSERT_EQ(meet(p, p), p);
        ASSERT_EQ(join(p, p), p);
        ASSERT_EQ(meet(p, join(p, q)), p);
        ASSERT_EQ(join(p, meet(p, q)), p);

        const bool le = is_refinement(p, q);
        ASSERT_EQ(le, m == p);
        ASSERT_EQ(le, j == q);
        ASSERT_TRUE(is_refinement(m, p));
        ASSERT_TRUE(is_refinement(m, q));
        ASSERT_TRUE(is_refinement(p, j));
    }
}

TEST(Partition, EnumerateBipartitions) {
    EXPECT_EQ(enumerate_bipartitions(4).size(), 7u);
    EXPECT_EQ(enumerate_bipartitions(6).size(), 31u);
    EXPECT_EQ(enumerate_bipartitions(10).size(), 511u);
    const auto two = enumerate_bipartitions(2);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(format_partition(two[0]), "1|2");
    for (std::size_t n = 2; n <= 12; ++n) {
        const auto bs = enumerate_bipartitions(n);
        EXPECT_EQ(bs.size(), stirling2(static_cast<unsigned>(n), 2));
        std::set<Bipartition> uniq(bs.begin(), bs.end());
        EXPECT_EQ(uniq.size(), bs.size());
        EXPECT_TRUE(std::is_sorted(bs.begin(), bs.end()));
        for (const auto& b : bs) {
            EXPECT_TRUE(b.contains(0));
            EXPECT_GE(b.second_size(), 1u);
        }
    }
    EXPECT_THROW(enumerate_bipartitions(1), invalid_input);
    EXPECT_THROW(enumerate_bipartitions(33), invalid_input);
}

TEST(Partition, BipartitionInvariants) {
    EXPECT_THROW(Bipartition(4, 0b0110), invalid_input);  // element 1 missing
    EXPECT_THROW(Bipartition(4, 0b1111), invalid_input);  // no complement
    EXPECT_THROW(Bipartition(4, 0b10001), invalid_input); // out of range
    const Bipartition b(32, 1u);
    EXPECT_EQ(b.second_size(), 31u);
    EXPECT_EQ(Bipartition::from_partition(P("134|2")), Bipartition(4, 0b1101));
    EXPECT_THROW(Bipartition::from_partition(P("12|3|4")), invalid_input);
}

TEST(Partition, EntailedDichotomiesExamples) {
    const auto d = entailed_dichotomies(P("12|3|4"));
    std::set<Partition> got;
    for (const auto& b : d) got.insert(b.as_partition());
    EXPECT_EQ(got, (std::set<Partition>{P("123|4"), P("124|3"), P("12|34")}));
    EXPECT_TRUE(entailed_dichotomies(Partition::one_block(5)).empty());
    const auto all6 = entailed_dichotomies(Partition::singletons(6));
    EXPECT_EQ(all6, enumerate_bipartitions(6));
}

TEST(Partition, MeetOfEntailedDichotomiesExhaustive) {
    // meet of the entailed dichotomies recovers mu; count is 2^(k-1) - 1.
    for (std::size_t n = 1; n <= 8; ++n) {
        for (const auto& mu : enumerate_partitions(n)) {
            const auto d = entailed_dichotomies(mu);
            const std::size_t k = mu.block_count();
            ASSERT_EQ(d.size(), (std::size_t{1} << (k - 1)) - 1);
            if (k == 1) continue;
            std::vector<Partition> lifted;
            for (const auto& b : d) {
                lifted.push_back(b.as_partition());
                ASSERT_TRUE(is_refinement(mu, lifted.back()));
            }
            ASSERT_EQ(meet_all(lifted), mu);
            ASSERT_EQ(meet_all(d), mu);
        }
    }
}

TEST(Partition, CoarseningsExamples) {
    const auto c = enumerate_coarsenings(P("12|3|4"));
    EXPECT_EQ(std::set<Partition>(c.begin(), c.end()),
              (std::set<Partition>{P("12|3|4"), P("123|4"), P("124|3"), P("12|34"), P("1234")}));
    EXPECT_EQ(enumerate_coarsenings(Partition::one_block(6)), std::vector<Partition>{Partition::one_block(6)});
    EXPECT_EQ(enumerate_coarsenings(Partition::singletons(6)).size(), 203u);
    EXPECT_THROW(enumerate_coarsenings(Partition::singletons(13)), invalid_input);
}

TEST(Partition, CoarseningsMeetToMuExhaustive) {
    for (std::size_t n = 1; n <= 8; ++n) {
        for (const auto& mu : enumerate_partitions(n)) {
            const auto c = enumerate_coarsenings(mu);
            ASSERT_EQ(c.size(), bell_number(static_cast<unsigned>(mu.block_count())));
            ASSERT_EQ(meet_all(c), mu);
        }
    }
}

TEST(Partition, CoarseningsMatchBruteForce) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto all = enumerate_partitions(n);
        for (const auto& mu : all) {
            std::set<Partition> brute;
            for (const auto& p : all)
                if (is_refinement(mu, p)) brute.insert(p);
            const auto c = enumerate_coarsenings(mu);
            ASSERT_EQ(std::set<Partition>(c.begin(), c.end()), brute);
        }
    }
}

TEST(Partition, EnumeratePartitions) {
    EXPECT_EQ(enumerate_partitions(1).size(), 1u);
    EXPECT_EQ(enumerate_partitions(4).size(), 15u);
    const auto ten = enumerate_partitions(10);
    EXPECT_EQ(ten.size(), 115975u);
    std::unordered_set<Partition> uniq(ten.begin(), ten.end());
    EXPECT_EQ(uniq.size(), ten.size());
    EXPECT_THROW(enumerate_partitions(11), invalid_input);
    EXPECT_THROW(enumerate_partitions(0), invalid_input);
}

TEST(PartitionText, ParseAndFormat) {
    const auto p = parse_partition("12|3|4");
    EXPECT_EQ(p.size(), 4u);
    EXPECT_EQ(p.block_count(), 3u);
    EXPECT_EQ(format_partition(p), "12|3|4");
    EXPECT_EQ(format_partition(parse_partition("4|3|21")), "12|3|4");
    EXPECT_EQ(format_partition(parse_partition("1,2,3,5,6|4")), "12356|4");
    EXPECT_EQ(format_partition(parse_partition("1 2 | 3 | 4")), "12|3|4");
    EXPECT_EQ(format_partition(parse_partition("12 | 3 | 4")), "12|3|4");
    EXPECT_EQ(parse_partition("12356|4", 6), parse_partition("4|6,5,3,2,1"));

    const auto big = parse_partition("1,2,3,4,5,6,8|7|9|10");
    EXPECT_EQ(big.size(), 10u);
    EXPECT_EQ(format_partition(big), "1,2,3,4,5,6,8|7|9|10");
}

TEST(PartitionText, Errors) {
    EXPECT_THROW(parse_partition("1|1|2"), invalid_input);
    EXPECT_THROW(parse_partition("12||3"), invalid_input);
    EXPECT_THROW(parse_partition("12|4"), invalid_input);   // 3 missing
    EXPECT_THROW(parse_partition("12|a"), invalid_input);
    EXPECT_THROW(parse_partition("10|2"), invalid_input);   // digit 0
    EXPECT_THROW(parse_partition(""), invalid_input);
    EXPECT_THROW(parse_partition("12|3", 4), invalid_input);
    EXPECT_THROW(parse_partition("12|35", 4), invalid_input);
}

TEST(PartitionText, RoundTripProperty) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 1 + trial % 14;
        const auto p = random_partition(n, gen);
        ASSERT_EQ(parse_partition(format_partition(p)), p) << format_partition(p);
    }
}
