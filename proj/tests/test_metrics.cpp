#include <doctest.h>

#include <set>
#include <utility>

#include "shrinkparc/metrics.hpp"
#include "shrinkparc/rng.hpp"

using namespace shrinkparc;

namespace {

Parcellation parc(std::vector<int> labels) {
    Parcellation p;
    p.labels = std::move(labels);
    p.k = 0;
    for (int l : p.labels) p.k = std::max(p.k, l + 1);
    return p;
}

// Independent route: materialize the same-label pair sets and intersect.
double dice_bruteforce(const Parcellation& a, const Parcellation& b,
                       const std::vector<int>& subset) {
    std::set<std::pair<int, int>> sa, sb;
    for (std::size_t x = 0; x < subset.size(); ++x)
        for (std::size_t y = 0; y < subset.size(); ++y) {
            const int i = subset[x], j = subset[y];
            if (i >= j) continue;
            if (a.labels[i] == a.labels[j]) sa.insert({i, j});
            if (b.labels[i] == b.labels[j]) sb.insert({i, j});
        }
    std::size_t inter = 0;
    for (const auto& p : sa) inter += sb.count(p);
    if (sa.size() + sb.size() == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size());
}

std::vector<int> all_voxels(int v) {
    std::vector<int> out(v);
    for (int i = 0; i < v; ++i) out[i] = i;
    return out;
}

}  // namespace

TEST_CASE("matrix mse") {
    SymMatrix a(3, 0.0), b(3, 0.0);
    a.set(0, 1, 0.2);
    a.set(0, 2, -0.1);
    a.set(1, 2, 0.4);
    CHECK(matrix_mse(a, a) == 0.0);

    b = a;
    for (auto [x, y] : {std::pair{0, 1}, {0, 2}, {1, 2}}) b.set(x, y, a(x, y) + 0.1);
    CHECK(matrix_mse(a, b) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(matrix_mse(a, b) == matrix_mse(b, a));

    SymMatrix other(4, 0.0);
    CHECK_THROWS_AS(matrix_mse(a, other), DimensionMismatch);

    ConnectivityMatrix ca, cb;
    ca.values = a;
    cb.values = b;
    ca.space = Space::Correlation;
    cb.space = Space::FisherZ;
    CHECK_THROWS_AS(matrix_mse(ca, cb), MixedSpace);
}

TEST_CASE("dice hand example and invariances") {
    const Parcellation a = parc({0, 0, 1, 1});
    const Parcellation b = parc({0, 1, 1, 1});
    CHECK(dice(a, b) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(dice(a, a) == 1.0);
    CHECK(dice(a, b) == dice(b, a));

    // Relabeling either argument changes nothing.
    const Parcellation a_relabel = parc({1, 1, 0, 0});
    CHECK(dice(a_relabel, b) == dice(a, b));
    CHECK(dice(a, parc({2, 0, 0, 0})) == dice(a, b));

    CHECK_THROWS_AS(dice(a, parc({0, 1, 2})), DimensionMismatch);
}

TEST_CASE("dice equals the brute-force pair-set formula on random parcellations") {
    rng::Rng r(77);
    for (int trial = 0; trial < 200; ++trial) {
        const int v = 2 + static_cast<int>(r.uniform_index(11));  // up to 12
        std::vector<int> la(v), lb(v);
        const int ka = 1 + static_cast<int>(r.uniform_index(4));
        const int kb = 1 + static_cast<int>(r.uniform_index(4));
        for (int i = 0; i < v; ++i) {
            la[i] = static_cast<int>(r.uniform_index(ka));
            lb[i] = static_cast<int>(r.uniform_index(kb));
        }
        const Parcellation a = parc(la), b = parc(lb);
        CHECK(dice(a, b) == dice_bruteforce(a, b, all_voxels(v)));
    }
}

TEST_CASE("restricted dice") {
    const Parcellation a = parc({0, 0, 1, 1});
    const Parcellation b = parc({0, 1, 1, 1});
    CHECK(dice_restricted(a, b, all_voxels(4)) == dice(a, b));
    CHECK(dice_restricted(a, b, {1, 2, 3}) == dice_bruteforce(a, b, {1, 2, 3}));
    // Subset where both parcellations agree exactly.
    CHECK(dice_restricted(a, b, {2, 3}) == 1.0);
    CHECK_THROWS_AS(dice_restricted(a, b, {}), EmptySubset);
    CHECK_THROWS_AS(dice_restricted(a, b, {9}), InvalidInput);
}

TEST_CASE("median conventions") {
    CHECK(median({3.0}) == 3.0);
    CHECK(median({1.0, 2.0, 9.0}) == 2.0);
    CHECK(median({1.0, 2.0, 3.0, 10.0}) == 2.5);
    CHECK_THROWS_AS(median({}), EmptyInput);
}

TEST_CASE("summarize reproduces the percent-change definitions") {
    ReliabilityReport r;
    r.per_subject_mse_raw = {0.00498};
    r.per_subject_mse_shrunk = {0.00119};
    r.per_subject_dice_raw = {0.750};
    r.per_subject_dice_shrunk = {0.962};
    const ReliabilityReport s = summarize(r);
    CHECK(s.median_mse_raw == 0.00498);
    CHECK(s.median_mse_shrunk == 0.00119);
    CHECK(s.pct_mse_decrease ==
          doctest::Approx(100.0 * (0.00498 - 0.00119) / 0.00498).epsilon(1e-15));
    CHECK(s.pct_mse_decrease == doctest::Approx(76.1).epsilon(1e-3));
    CHECK(s.pct_dice_increase ==
          doctest::Approx(100.0 * (0.962 - 0.750) / 0.750).epsilon(1e-15));
    CHECK(s.pct_dice_increase == doctest::Approx(28.3).epsilon(2e-3));

    ReliabilityReport empty;
    CHECK_THROWS_AS(summarize(empty), EmptyInput);
}
