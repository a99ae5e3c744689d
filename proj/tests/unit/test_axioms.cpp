// Overlapness against the three axioms, plus the baseline matrix.
#include "../common/axiom_instances.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace hyperlap;

namespace {

using namespace testutil;
using Measure = std::function<double(EdgeSet)>;

template <class Gen>
int count_violations(Gen gen, const Measure& f, int wanted, int* generated) {
    Rng rng(20200101);
    int violations = 0;
    *generated = 0;
    for (int tries = 0; *generated < wanted && tries < 1000 * wanted; ++tries) {
        std::optional<std::pair<Edges, Edges>> inst = gen(rng);
        if (!inst) continue;
        ++*generated;
        if (!(f(inst->first) < f(inst->second))) ++violations;
    }
    return violations;
}

Measure baseline(BaselineKind k) {
    return [k](EdgeSet e) { return baseline_measure(k, e); };
}

const Measure over = [](EdgeSet e) { return overlapness(e); };
const Measure dens = [](EdgeSet e) { return density(e); };

}  // namespace

TEST_SUITE("axioms") {

TEST_CASE("overlapness satisfies axiom 1") {
    int n = 0;
    CHECK(count_violations(axiom1_instance, over, 2000, &n) == 0);
    CHECK(n >= 1000);
}

TEST_CASE("overlapness satisfies axiom 2") {
    int n = 0;
    CHECK(count_violations(axiom2_instance, over, 2000, &n) == 0);
    CHECK(n >= 1000);
}

TEST_CASE("overlapness satisfies axiom 3") {
    int n = 0;
    CHECK(count_violations(axiom3_instance, over, 2000, &n) == 0);
    CHECK(n >= 1000);
}

TEST_CASE("density satisfies axioms 1 and 2") {
    int n = 0;
    CHECK(count_violations(axiom1_instance, dens, 2000, &n) == 0);
    CHECK(count_violations(axiom2_instance, dens, 2000, &n) == 0);
}

TEST_CASE("union inverse satisfies axiom 2") {
    int n = 0;
    CHECK(count_violations(axiom2_instance, baseline(BaselineKind::UnionInverse), 2000, &n) == 0);
}

TEST_CASE("generated instances satisfy the premises") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto one = axiom1_instance(rng);
        CHECK(premises_hold(1, one->first, one->second));
        if (auto two = axiom2_instance(rng)) CHECK(premises_hold(2, two->first, two->second));
        if (auto three = axiom3_instance(rng)) CHECK(premises_hold(3, three->first, three->second));
    }
}

TEST_CASE("stored counterexamples cover every failing cell") {
    const auto stored = stored_counterexamples();
    for (const auto& cx : stored) {
        CAPTURE(cx.axiom);
        CAPTURE(table_measure_name(cx.measure));
        CHECK(premises_hold(cx.axiom, cx.e, cx.e2));
        CHECK(table_fails(cx.measure, cx.axiom));
        CHECK(!(table_measure(cx.measure, cx.e) < table_measure(cx.measure, cx.e2)));
        CHECK(overlapness(cx.e) < overlapness(cx.e2));
    }
    for (int axiom = 1; axiom <= 3; ++axiom)
        for (auto m : {TableMeasure::Intersection, TableMeasure::UnionInverse, TableMeasure::Jaccard,
                       TableMeasure::OverlapCoefficient, TableMeasure::Density}) {
            if (!table_fails(m, axiom)) continue;
            CAPTURE(axiom);
            CAPTURE(table_measure_name(m));
            CHECK(std::any_of(stored.begin(), stored.end(),
                              [&](const Counterexample& cx) { return cx.axiom == axiom && cx.measure == m; }));
        }
}

}
