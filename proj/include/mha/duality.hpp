#pragma once

#include "mha/integration.hpp"

namespace mha {

// Dual algebra on the basis {a_i . phi}. Change of presentation between
// a.phi, phi.a, a.psi, psi.a is through the stored pairing matrices.
struct DualAlgebra {
    StructureAlgebra hatA;       // structure constants in the a.phi basis
    Matrix pairing;              // pairing[i][j] = (a_i . phi)(a_j)
    Matrix phi_left;             // column a: coefficients of a.phi (n x n, invertible)
    Matrix phi_right, psi_left, psi_right;
    std::vector<Vec> hatB_basis; // images of C in the dual algebra (coords in hatA)
    std::vector<Vec> hatC_basis; // images of B
};

// The functional with row `row` expressed in the a.phi basis.
Vec dual_coords(const DualAlgebra& d, const Vec& functional_row);

std::optional<DualAlgebra> dual_algebra(const MeasuredAlgebroid& M, VerificationReport& report);

// Full dual measured structure: quantum graph on hatA, canonical maps
// obtained by restricting the transposes of the primal ones, counits,
// antipode, base weight and integrals, all verified.
struct DualMeasured {
    DualAlgebra dual;
    MeasuredAlgebroid M; // the dual, as a measured algebroid in its own right
};

std::optional<DualMeasured> dual_measured(const MeasuredAlgebroid& M, VerificationReport& report);

// Biduality certificate: a -> (evaluation at a) is an isomorphism of
// measured structures onto the double dual.
struct BidualCertificate {
    Matrix relabeling; // dim A x dim A, the map a -> a-check in bidual coords
    bool isomorphic = false;
};

std::optional<BidualCertificate> bidual_isomorphism(const MeasuredAlgebroid& M,
                                                    VerificationReport& report);

// Multiplier-level duality: functionals whose convolution operators map A
// into A form M(hatA); the comultiplication pairing against products.
void multiplier_duality(const MeasuredAlgebroid& M, const DualMeasured& D,
                        VerificationReport& report);

} // namespace mha
