#pragma once

#include <functional>
#include <vector>

#include "gpvw/field.hpp"

namespace gpvw {

/// Real-linear operator on complex grid vectors.
using LinearMap = std::function<void(const std::vector<cplx>& in, std::vector<cplx>& out)>;

/// Real inner product sum Re(a conj(b)), reduced in fixed-size blocks so the
/// result is independent of the thread count.
double real_dot(const std::vector<cplx>& a, const std::vector<cplx>& b);

struct GmresOptions {
    double rtol = 1e-3;   ///< stop when ||b - A M y|| <= rtol ||b||
    int restart = 60;
    int max_iterations = 600;
};

struct GmresResult {
    std::vector<cplx> solution;  ///< x = M y
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Restarted GMRES with right preconditioning for A x = b, the vectors viewed
/// as real vectors of twice the length (A need only be real-linear).
GmresResult gmres(const LinearMap& A, const LinearMap& M, const std::vector<cplx>& b, const GmresOptions& opt);

}  // namespace gpvw
