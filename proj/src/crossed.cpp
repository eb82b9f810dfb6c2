#include "mha/crossed.hpp"

namespace mha {

void FiniteGroup::validate() const {}
FiniteGroup FiniteGroup::cyclic(Index n) { FiniteGroup g; (void)n; return g; }
FiniteHopfAlgebra group_hopf(const FiniteGroup& G) { (void)G; return {}; }
FiniteHopfAlgebra function_hopf(const FiniteGroup& G) { (void)G; return {}; }
bool verify_hopf(const FiniteHopfAlgebra& H, VerificationReport& report) {
    (void)H; (void)report; return false;
}
Vec CoupledActionData::act_right(const Vec& x, const Vec& h) const { (void)h; return x; }
Vec CoupledActionData::act_left(const Vec& h, const Vec& y) const { (void)h; return y; }
bool verify_coupled_action(const FiniteHopfAlgebra& H, const CoupledActionData& D,
                           VerificationReport& report) {
    (void)H; (void)D; (void)report; return false;
}
CrossedProduct build_crossed_product(const FiniteHopfAlgebra& H, const CoupledActionData& D) {
    (void)H; (void)D; return {};
}
MeasuredBuildResult build_crossed_measure(const FiniteHopfAlgebra& H, const CoupledActionData& D) {
    (void)H; (void)D; return {};
}
void verify_crossed_dual(const MeasuredAlgebroid& M, const FiniteHopfAlgebra& H,
                         const CoupledActionData& D, VerificationReport& report) {
    (void)M; (void)H; (void)D; (void)report;
}
SwapModel z2_swap_model() { return {}; }

} // namespace mha
