#ifndef LIFTLEARN_INTRUSIVE_HPP
#define LIFTLEARN_INTRUSIVE_HPP

#include "liftlearn/lifting.hpp"
#include "liftlearn/opinf.hpp"
#include "liftlearn/pod.hpp"

namespace liftlearn {

// Projection of the lifted operators with test basis W and trial basis V:
// A_r = W^T A V, H_r = W^T H (V (x) V), B_r = W^T B, C_r = C V.
// Requires W^T V = I. H_r is contracted term by term from the sparse H and
// stored through its symmetric compact form.
ReducedQuadraticModel project_operators(const LiftedOperators &ops, const Matrix &test_basis,
                                        const Matrix &trial_basis, std::string basis_ref = {});

// Galerkin case W = V = Phi_r.
ReducedQuadraticModel galerkin_reduce(const LiftedOperators &ops, const PodBasis &basis);

}  // namespace liftlearn

#endif  // LIFTLEARN_INTRUSIVE_HPP
