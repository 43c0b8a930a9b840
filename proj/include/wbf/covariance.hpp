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

#include <cmath>
#include <stdexcept>

#include "wbf/types.hpp"

namespace wbf
{
    // Hermitian positive semidefinite array covariance. The stored matrix already contains the
    // diagonal loading; loading_factor records how much was added.
    template <typename Real = double>
    class CovarianceMatrix
    {
    public:
        CovarianceMatrix() = default;

        // Adds loading_factor * I and symmetrizes as (R + R^H) / 2.
        explicit CovarianceMatrix(CMatrix<Real> matrix, Real loading_factor = Real(0))
            : loading_(loading_factor)
        {
            if (matrix.rows() == 0 || matrix.rows() != matrix.cols())
                throw std::invalid_argument("covariance matrix must be square and non-empty");
            if (!(loading_factor >= Real(0)))
                throw std::invalid_argument("loading_factor must be nonnegative");
            if (!matrix.allFinite())
                throw std::invalid_argument("covariance matrix contains non-finite entries");
            matrix.diagonal().array() += Complex<Real>(loading_factor, Real(0));
            matrix_ = (matrix + matrix.adjoint()) / Real(2);
            // Tolerance scales with the matrix so large-power scenarios are not rejected for rounding.
            const Real tol = Real(1e-10) * std::max(Real(1), matrix_.cwiseAbs().maxCoeff());
            if (min_eigenvalue() < -tol)
                throw std::invalid_argument("covariance matrix is not positive semidefinite");
        }

        const CMatrix<Real> &matrix() const { return matrix_; }
        Real loading_factor() const { return loading_; }
        Eigen::Index size() const { return matrix_.rows(); }

        Real min_eigenvalue() const
        {
            Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(matrix_, Eigen::EigenvaluesOnly);
            return es.eigenvalues().minCoeff();
        }

        Real max_hermitian_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

        CovarianceMatrix scaled(Real alpha) const
        {
            CovarianceMatrix out;
            out.matrix_ = matrix_ * alpha;
            out.loading_ = loading_ * alpha;
            return out;
        }

        template <typename To>
        CovarianceMatrix<To> cast() const
        {
            return CovarianceMatrix<To>(matrix_.template cast<Complex<To>>(), To(0));
        }

    private:
        CMatrix<Real> matrix_;
        Real loading_{};
    };

    // R = X X^H / T + loading * I for an N x T block of snapshots.
    template <typename Derived>
    auto sample_covariance(const Eigen::MatrixBase<Derived> &snapshots,
                           typename Derived::RealScalar loading_factor = 0)
    {
        using Real = typename Derived::RealScalar;
        if (snapshots.rows() == 0 || snapshots.cols() == 0)
            throw std::invalid_argument("sample_covariance: snapshot matrix is empty");
        CMatrix<Real> r = CMatrix<Real>::Zero(snapshots.rows(), snapshots.rows());
        r.template selfadjointView<Eigen::Lower>().rankUpdate(snapshots.derived(), Real(1) / Real(snapshots.cols()));
        r.template triangularView<Eigen::StrictlyUpper>() = r.adjoint();
        return CovarianceMatrix<Real>(std::move(r), loading_factor);
    }
}
