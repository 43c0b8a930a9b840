// SPDX-License-Identifier: Apache-2.0
//
// wbf - narrowband and wideband distortionless beamformer synthesis
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbf/array_model.hpp"
#include "wbf/covariance.hpp"
#include "wbf/types.hpp"

namespace wbf
{
    // Linear equality constraints w^H A = B. Column k of A is the response the array must
    // reproduce, B holds the prescribed complex gains.
    template <typename Real = double>
    class ConstraintSet
    {
    public:
        ConstraintSet() = default;

        ConstraintSet(CMatrix<Real> matrix_A, CRowVector<Real> response_B)
            : a_(std::move(matrix_A)), b_(std::move(response_B))
        {
            if (a_.cols() < 1 || a_.rows() < 1)
                throw std::invalid_argument("constraint set needs at least one constraint column");
            if (b_.size() != a_.cols())
                throw std::invalid_argument("constraint response length must equal the number of constraints");
            if (a_.cols() > a_.rows())
                throw DegenerateConstraintsError("more constraints (" + std::to_string(a_.cols()) +
                                                 ") than sensors (" + std::to_string(a_.rows()) + ")");
            if (!a_.allFinite() || !b_.allFinite())
                throw std::invalid_argument("constraint set contains non-finite entries");
        }

        const CMatrix<Real> &matrix_A() const { return a_; }
        const CRowVector<Real> &response_B() const { return b_; }
        Eigen::Index num_constraints() const { return a_.cols(); }
        Eigen::Index num_sensors() const { return a_.rows(); }

        // Largest |w^H A - B| over the constraints.
        Real residual(const CVector<Real> &w) const
        {
            return (w.adjoint() * a_ - b_).cwiseAbs().maxCoeff();
        }

        template <typename To>
        ConstraintSet<To> cast() const
        {
            return {a_.template cast<Complex<To>>(), b_.template cast<Complex<To>>()};
        }

    private:
        CMatrix<Real> a_;
        CRowVector<Real> b_;
    };

    // Distortionless response b toward theta0 at every listed frequency.
    template <typename Real>
    ConstraintSet<Real> distortionless_constraints(const ArrayGeometry<Real> &geom, Real theta0_rad,
                                                   std::span<const Real> freqs_hz,
                                                   Complex<Real> b = Complex<Real>(1))
    {
        if (freqs_hz.empty())
            throw std::invalid_argument("distortionless_constraints: no constraint frequencies");
        if (b == Complex<Real>(0))
            throw std::invalid_argument("distortionless_constraints: constraint gain b must be nonzero");
        const auto k = Eigen::Index(freqs_hz.size());
        CMatrix<Real> a(geom.num_sensors, k);
        for (Eigen::Index i = 0; i < k; ++i)
            a.col(i) = steering_vector(geom, theta0_rad, freqs_hz[std::size_t(i)]).entries;
        return {std::move(a), CRowVector<Real>::Constant(k, b)};
    }

    template <typename Real = double>
    struct WeightVector
    {
        CVector<Real> weights;
        ConstraintSet<Real> constraints;
        CVector<Real> multipliers;  // w = R^-1 A lambda
        Real objective_value{};     // w^H R w
        Real gram_condition{1};     // 2-norm condition number of A^H R^-1 A

        Eigen::Index size() const { return weights.size(); }

        // Complex gain w^H a.
        Complex<Real> response(const CVector<Real> &a) const { return weights.dot(a); }
    };

    namespace detail
    {
        // Cholesky factor of R with a numerical-rank guard.
        template <typename Real>
        Eigen::LLT<CMatrix<Real>> factor_covariance(const CovarianceMatrix<Real> &cov)
        {
            Eigen::LLT<CMatrix<Real>> llt(cov.matrix());
            if (llt.info() != Eigen::Success)
                throw NumericalRankError("covariance matrix R is not positive definite (Cholesky failed)");
            const auto d = llt.matrixLLT().diagonal().real();
            const Real ratio = d.minCoeff() / d.maxCoeff();
            const Real limit = std::sqrt(Real(cov.size()) * std::numeric_limits<Real>::epsilon());
            if (!(ratio > limit))
                throw NumericalRankError("covariance matrix R is numerically singular (reciprocal condition " +
                                         std::to_string(double(ratio * ratio)) + ")");
            return llt;
        }

        template <typename Real>
        Real rank_tolerance()
        {
            return Real(1000) * std::numeric_limits<Real>::epsilon();
        }
    }

    // Minimum-variance distortionless response: minimise w^H R w subject to w^H a = 1.
    // w = R^-1 a / (a^H R^-1 a), evaluated through the Cholesky factor R = L L^H.
    template <typename Real>
    WeightVector<Real> mvdr_weights(const CovarianceMatrix<Real> &cov, const SteeringVector<Real> &a)
    {
        if (a.size() != cov.size())
            throw std::invalid_argument("mvdr_weights: steering vector length does not match covariance size");
        const auto llt = detail::factor_covariance(cov);

        CVector<Real> y = llt.matrixL().solve(a.entries);
        const Real gain = y.squaredNorm(); // a^H R^-1 a
        if (!(gain > Real(0)))
            throw DegenerateConstraintsError("mvdr_weights: steering vector is zero");

        WeightVector<Real> out;
        out.weights = llt.matrixU().solve(y) / gain;
        out.constraints = ConstraintSet<Real>(a.entries, CRowVector<Real>::Constant(1, Complex<Real>(1)));
        out.multipliers = CVector<Real>::Constant(1, Complex<Real>(Real(1) / gain));
        out.objective_value = Real(1) / gain;
        return out;
    }

    // Multi-constraint minimum variance: minimise w^H R w subject to w^H A = B.
    //
    // w = R^-1 A lambda with lambda solving (A^H R^-1 A) lambda = B^H. The Gram matrix is never
    // formed: with R = L L^H and L^-1 A = Q T (thin QR), A^H R^-1 A = T^H T, so
    //   z = T^-H B^H,  lambda = T^-1 z,  w = L^-H Q z,  w^H R w = |z|^2.
    template <typename Real>
    WeightVector<Real> mvmfdr_weights(const CovarianceMatrix<Real> &cov, const ConstraintSet<Real> &cs)
    {
        const Eigen::Index n = cov.size();
        const Eigen::Index k = cs.num_constraints();
        if (cs.num_sensors() != n)
            throw std::invalid_argument("mvmfdr_weights: constraint matrix rows do not match covariance size");
        if (k > n)
            throw DegenerateConstraintsError("mvmfdr_weights: more constraints than sensors");

        const auto llt = detail::factor_covariance(cov);
        const CMatrix<Real> whitened = llt.matrixL().solve(cs.matrix_A());

        Eigen::HouseholderQR<CMatrix<Real>> qr(whitened);
        const CMatrix<Real> t = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
        const auto diag = t.diagonal().cwiseAbs();
        if (!(diag.minCoeff() > detail::rank_tolerance<Real>() * diag.maxCoeff()))
            throw DegenerateConstraintsError("constraint matrix A is rank deficient (duplicate or collinear constraints)");

        const CVector<Real> rhs = cs.response_B().adjoint();
        const CVector<Real> z = t.adjoint().template triangularView<Eigen::Lower>().solve(rhs);
        const CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, k);

        WeightVector<Real> out;
        out.weights = llt.matrixU().solve(q * z);
        out.constraints = cs;
        out.multipliers = t.template triangularView<Eigen::Upper>().solve(z);
        out.objective_value = z.squaredNorm();

        const auto sv = Eigen::JacobiSVD<CMatrix<Real>>(t).singularValues();
        const Real c = sv(0) / sv(k - 1);
        out.gram_condition = c * c;
        return out;
    }

    // Independent route to the same optimum: solve the full KKT system
    //   [ R   -A ] [ w      ]   [ 0   ]
    //   [ A^H  0 ] [ lambda ] = [ B^H ]
    // densely with full pivoting. Meant for cross-checking mvmfdr_weights.
    template <typename Real>
    WeightVector<Real> kkt_oracle(const CovarianceMatrix<Real> &cov, const ConstraintSet<Real> &cs)
    {
        const Eigen::Index n = cov.size();
        const Eigen::Index k = cs.num_constraints();
        if (cs.num_sensors() != n)
            throw std::invalid_argument("kkt_oracle: constraint matrix rows do not match covariance size");

        CMatrix<Real> kkt = CMatrix<Real>::Zero(n + k, n + k);
        kkt.topLeftCorner(n, n) = cov.matrix();
        kkt.topRightCorner(n, k) = -cs.matrix_A();
        kkt.bottomLeftCorner(k, n) = cs.matrix_A().adjoint();

        CVector<Real> rhs = CVector<Real>::Zero(n + k);
        rhs.tail(k) = cs.response_B().adjoint();

        Eigen::FullPivLU<CMatrix<Real>> lu(kkt);
        lu.setThreshold(detail::rank_tolerance<Real>() * std::numeric_limits<Real>::epsilon());
        if (!lu.isInvertible())
            throw DegenerateConstraintsError("KKT matrix is singular (degenerate constraints or singular R)");

        CVector<Real> sol = lu.solve(rhs);
        // Two steps of iterative refinement.
        for (int i = 0; i < 2; ++i)
            sol += lu.solve(rhs - kkt * sol);

        WeightVector<Real> out;
        out.weights = sol.head(n);
        out.multipliers = sol.tail(k);
        out.constraints = cs;
        out.objective_value = std::max(Real(0), (out.weights.adjoint() * cov.matrix() * out.weights)(0).real());
        return out;
    }
}
