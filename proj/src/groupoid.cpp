#include "mha/groupoid.hpp"

#include <sstream>
#include <stdexcept>

namespace mha {

void FiniteGroupoid::validate() const {
    Index nu = static_cast<Index>(units.size());
    Index na = arrow_count();
    auto fail = [](const std::string& msg) { throw std::invalid_argument("groupoid: " + msg); };
    if (static_cast<Index>(source.size()) != na || static_cast<Index>(target.size()) != na)
        fail("source/target size mismatch");
    if (static_cast<Index>(unit_arrow.size()) != nu) fail("unit arrow table size mismatch");
    if (static_cast<Index>(inverse.size()) != na) fail("inverse table size mismatch");
    for (Index x = 0; x < nu; ++x) {
        Index e = unit_arrow[x];
        if (e < 0 || e >= na || source[e] != x || target[e] != x)
            fail("unit arrow of " + units[x] + " is not an endo-arrow");
    }
    for (const auto& [pair, result] : compose) {
        auto [l, r] = pair;
        if (!composable(l, r)) fail("compose entry (" + arrows[l] + "," + arrows[r] + ") not composable");
        if (source[result] != source[r] || target[result] != target[l])
            fail("compose entry (" + arrows[l] + "," + arrows[r] + ") has wrong endpoints");
    }
    auto comp = [&](Index l, Index r) {
        auto it = compose.find({l, r});
        if (it == compose.end())
            fail("missing composition (" + arrows[l] + "," + arrows[r] + ")");
        return it->second;
    };
    for (Index g = 0; g < na; ++g) {
        if (comp(unit_arrow[target[g]], g) != g || comp(g, unit_arrow[source[g]]) != g)
            fail("unit law fails at " + arrows[g]);
        Index gi = inverse[g];
        if (source[gi] != target[g] || target[gi] != source[g])
            fail("inverse of " + arrows[g] + " has wrong endpoints");
        if (comp(g, gi) != unit_arrow[target[g]] || comp(gi, g) != unit_arrow[source[g]])
            fail("inverse law fails at " + arrows[g]);
    }
    for (Index g = 0; g < na; ++g)
        for (Index h = 0; h < na; ++h) {
            if (!composable(g, h)) continue;
            for (Index k = 0; k < na; ++k) {
                if (!composable(h, k)) continue;
                if (comp(comp(g, h), k) != comp(g, comp(h, k)))
                    fail("associativity fails at (" + arrows[g] + "," + arrows[h] + "," +
                         arrows[k] + ")");
            }
        }
}

FiniteGroupoid FiniteGroupoid::cyclic_group(Index order) {
    FiniteGroupoid G;
    G.units = {"*"};
    for (Index i = 0; i < order; ++i) G.arrows.push_back("g" + std::to_string(i));
    G.source.assign(order, 0);
    G.target.assign(order, 0);
    G.unit_arrow = {0};
    G.inverse.resize(order);
    for (Index i = 0; i < order; ++i) {
        G.inverse[i] = (order - i) % order;
        for (Index j = 0; j < order; ++j) G.compose[{i, j}] = (i + j) % order;
    }
    return G;
}

FiniteGroupoid FiniteGroupoid::pair_groupoid(Index points) {
    FiniteGroupoid G;
    for (Index i = 0; i < points; ++i) G.units.push_back("p" + std::to_string(i + 1));
    // arrow (i <- j), written j -> i, source j, target i; units first
    auto name = [](Index i, Index j) {
        return "a" + std::to_string(j + 1) + std::to_string(i + 1);
    };
    std::vector<std::vector<Index>> id(points, std::vector<Index>(points));
    for (Index i = 0; i < points; ++i) {
        id[i][i] = static_cast<Index>(G.arrows.size());
        G.arrows.push_back(name(i, i));
        G.source.push_back(i);
        G.target.push_back(i);
    }
    for (Index j = 0; j < points; ++j)
        for (Index i = 0; i < points; ++i) {
            if (i == j) continue;
            id[i][j] = static_cast<Index>(G.arrows.size());
            G.arrows.push_back(name(i, j));
            G.source.push_back(j);
            G.target.push_back(i);
        }
    G.unit_arrow.resize(points);
    for (Index i = 0; i < points; ++i) G.unit_arrow[i] = id[i][i];
    G.inverse.resize(G.arrows.size());
    for (Index i = 0; i < points; ++i)
        for (Index j = 0; j < points; ++j) G.inverse[id[i][j]] = id[j][i];
    for (Index i = 0; i < points; ++i)
        for (Index j = 0; j < points; ++j)
            for (Index k = 0; k < points; ++k) G.compose[{id[i][j], id[j][k]}] = id[i][k];
    return G;
}

FiniteGroupoid FiniteGroupoid::disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    FiniteGroupoid G;
    Index ua = static_cast<Index>(a.units.size());
    Index na = a.arrow_count();
    for (const auto& u : a.units) G.units.push_back("L." + u);
    for (const auto& u : b.units) G.units.push_back("R." + u);
    for (const auto& g : a.arrows) G.arrows.push_back("L." + g);
    for (const auto& g : b.arrows) G.arrows.push_back("R." + g);
    G.source = a.source;
    G.target = a.target;
    for (Index g = 0; g < b.arrow_count(); ++g) {
        G.source.push_back(b.source[g] + ua);
        G.target.push_back(b.target[g] + ua);
    }
    G.unit_arrow = a.unit_arrow;
    for (Index x = 0; x < static_cast<Index>(b.units.size()); ++x)
        G.unit_arrow.push_back(b.unit_arrow[x] + na);
    G.inverse = a.inverse;
    for (Index g = 0; g < b.arrow_count(); ++g) G.inverse.push_back(b.inverse[g] + na);
    G.compose = a.compose;
    for (const auto& [pair, result] : b.compose)
        G.compose[{pair.first + na, pair.second + na}] = result + na;
    return G;
}

UnitMeasure UnitMeasure::uniform(Index units) {
    UnitMeasure m;
    m.weights.assign(units, Scalar(1));
    return m;
}

namespace {

// Function algebra: basis of indicator functions, ordered units first the
// way the arrow list is.
StructureAlgebra groupoid_function_algebra(const FiniteGroupoid& G, bool with_star) {
    Index n = G.arrow_count();
    LabeledSpace space;
    for (const auto& a : G.arrows) space.labels.push_back("d[" + a + "]");
    std::vector<std::tuple<Index, Index, Index, Scalar>> triples;
    for (Index i = 0; i < n; ++i) triples.emplace_back(i, i, i, Scalar(1));
    std::optional<Matrix> star;
    if (with_star) star = Matrix::identity(n);
    return StructureAlgebra::from_triples(std::move(space), triples, std::move(star));
}

} // namespace

AlgebroidBuildResult build_groupoid_algebroid(const FiniteGroupoid& G, bool with_star) {
    G.validate();
    Index n = G.arrow_count();
    Index nu = static_cast<Index>(G.units.size());
    StructureAlgebra A = groupoid_function_algebra(G, with_star);

    // B = functions pulled back along the source, C along the target.
    std::vector<Vec> Bb(nu, Vec(n)), Cb(nu, Vec(n));
    for (Index g = 0; g < n; ++g) {
        Bb[G.source[g]][g] = Scalar(1);
        Cb[G.target[g]][g] = Scalar(1);
    }
    // Pulling back along the inversion swaps the two bases unitwise.
    Matrix S_B = Matrix::identity(nu), S_C = Matrix::identity(nu);
    QuantumGraphPair g = QuantumGraphPair::make(std::move(A), Bb, Cb, S_B, S_C);

    // Comultiplication dual to composition: the lift of Delta(d_gamma) is
    // the sum of d_alpha (x) d_beta over alpha beta = gamma.
    Matrix delta(n * n, n);
    for (const auto& [pair, result] : G.compose) {
        auto [l, r] = pair;
        delta.at(l * n + r, result) += Scalar(1);
    }
    return build_hopf_algebroid(std::move(g), delta, delta);
}

MeasuredBuildResult build_groupoid_measure(const FiniteGroupoid& G, const UnitMeasure& mu,
                                           bool with_star) {
    MeasuredBuildResult out;
    if (static_cast<Index>(mu.weights.size()) != static_cast<Index>(G.units.size()))
        throw std::invalid_argument("groupoid measure: one weight per unit required");
    bool positive = true;
    for (const auto& w : mu.weights)
        if (!w.is_real() || w.sign() <= 0) positive = false;
    AlgebroidBuildResult built = build_groupoid_algebroid(G, with_star);
    out.report = built.report;
    out.report.add("prop:groupoid-hopf", built.algebroid.has_value());
    if (!positive) {
        out.report.add("thm:groupoid-measured", false,
                       "unit measure is not strictly positive");
        return out;
    }
    if (!built.algebroid) return out;
    const HopfAlgebroid& h = *built.algebroid;
    Index n = h.dim();

    // phi integrates with the target-fibre weight, psi with the source
    // fibre; the base weight is the unit-space integral carried to B and C.
    Functional phi{Vec(n)}, psi{Vec(n)};
    for (Index g = 0; g < n; ++g) {
        phi.coeffs[g] = mu.weights[G.target[g]];
        psi.coeffs[g] = mu.weights[G.source[g]];
    }
    BaseWeight bw;
    bw.mu_B = Vec(h.g.B.dim());
    bw.mu_C = Vec(h.g.C.dim());
    for (Index x = 0; x < static_cast<Index>(G.units.size()); ++x) {
        bw.mu_B[x] = mu.weights[x];
        bw.mu_C[x] = mu.weights[x];
    }

    MeasuredBuildResult measured = verify_measured(h, bw, phi, psi);
    for (const auto& c : measured.report.checks) out.report.checks.push_back(c);
    out.report.stopped_at = measured.report.stopped_at;
    if (!measured.m) return out;

    // Radon-Nikodym check: the modular element is the pointwise quotient of
    // the source and target weights.
    Vec expected(n);
    for (Index g = 0; g < n; ++g)
        expected[g] = mu.weights[G.source[g]] / mu.weights[G.target[g]];
    bool delta_ok = measured.m->modular.delta == expected;
    // Cocycle property along composition.
    for (const auto& [pair, result] : G.compose) {
        if (expected[result] != expected[pair.first] * expected[pair.second]) delta_ok = false;
    }
    out.report.add("groupoid-delta-cocycle", delta_ok);
    out.report.add("thm:groupoid-measured", measured.report.all_passed() && delta_ok);
    out.m = std::move(measured.m);
    return out;
}

} // namespace mha
