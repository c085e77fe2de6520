#include "splitpd/lp.h"

#include <algorithm>
#include <cmath>
#include <optional>

using splitpd::LinearProgram;
using splitpd::LP_INF;
using splitpd::LpNumericalError;
using splitpd::LpOptions;
using splitpd::LpResult;
using splitpd::LpStatus;
using splitpd::RowSense;

LinearProgram::LinearProgram(int numRows)
{
    for (int i = 0; i < numRows; ++i)
        addRow(RowSense::Equal, 0.0);
}

int LinearProgram::addRow(RowSense sense, double rhs)
{
    rhs_.push_back(rhs);
    sense_.push_back(sense);
    for (auto &col : cols_)
        col.push_back(0.0);
    return numRows() - 1;
}

int LinearProgram::addColumn(double cost, std::vector<double> coefficients, double upper)
{
    if (static_cast<int>(coefficients.size()) != numRows())
        throw std::invalid_argument("column length must equal the number of rows");
    if (upper < 0)
        throw std::invalid_argument("column upper bound must be non-negative");

    cost_.push_back(cost);
    upper_.push_back(upper);
    cols_.push_back(std::move(coefficients));
    return numCols() - 1;
}

char const *splitpd::toString(LpStatus status)
{
    switch (status)
    {
        case LpStatus::Optimal:
            return "optimal";
        case LpStatus::Infeasible:
            return "infeasible";
        case LpStatus::Unbounded:
            return "unbounded";
    }
    return "unknown";
}

namespace
{
constexpr double PRIMAL_TOL = 1e-9;
constexpr double DUAL_TOL = 1e-9;
constexpr double PIVOT_TOL = 1e-9;
constexpr double SINGULAR_TOL = 1e-11;

// Variables: structurals [0, n), row logicals [n, n + m), artificials
// [n + m, n + 2m). Logical i has coefficient sigma_i in row i, artificial i has
// tau_i.
class Simplex
{
public:
    Simplex(LinearProgram const &lp, LpOptions const &options)
        : lp_(lp),
          m_(lp.numRows()),
          n_(lp.numCols()),
          options_(options),
          sigma_(m_, 1.0),
          tau_(m_, 1.0)
    {
        auto const total = n_ + 2 * m_;
        cost_.assign(total, 0.0);
        upper_.assign(total, LP_INF);
        for (int j = 0; j != n_; ++j)
            upper_[j] = lp.upper(j);
        for (int i = 0; i != m_; ++i)
        {
            if (lp.sense(i) == RowSense::GreaterEqual)
                sigma_[i] = -1.0;
            if (lp.sense(i) == RowSense::Equal)
                upper_[n_ + i] = 0.0;
        }

        pos_.assign(total, -1);
        atUpper_.assign(total, 0);
        maxIterations_ = options.maxIterations >= 0
                             ? options.maxIterations
                             : 100L * (m_ + n_) + 10000;
    }

    LpResult run(std::vector<int> const *warmBasis)
    {
        LpResult result;
        if (!(warmBasis && tryWarmStart(*warmBasis)))
        {
            coldStart();

            bool needPhase1 = false;
            for (int i = 0; i != m_; ++i)
                needPhase1 = needPhase1 || head_[i] >= n_ + m_;

            if (needPhase1)
            {
                std::fill(cost_.begin(), cost_.end(), 0.0);
                for (int i = 0; i != m_; ++i)
                    cost_[n_ + m_ + i] = 1.0;

                if (!optimize())
                    throw LpNumericalError("phase 1 reported unbounded");

                double infeasibility = 0;
                double scale = 1;
                for (int i = 0; i != m_; ++i)
                    scale = std::max(scale, std::abs(lp_.rhs(i)));
                for (int i = 0; i != m_; ++i)
                    if (head_[i] >= n_ + m_)
                        infeasibility += std::max(0.0, xB_[i]);
                for (int j = n_ + m_; j != n_ + 2 * m_; ++j)
                    if (pos_[j] < 0 && atUpper_[j])
                        throw LpNumericalError("artificial at an infinite bound");

                if (infeasibility > 1e-7 * scale)
                {
                    result.status = LpStatus::Infeasible;
                    result.iterations = iterations_;
                    return result;
                }
            }

            for (int i = 0; i != m_; ++i)
                upper_[n_ + m_ + i] = 0.0;
        }

        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int j = 0; j != n_; ++j)
            cost_[j] = lp_.cost(j);

        // Re-optimise after a clean refactorisation until the optimality
        // check holds on fresh values.
        for (int round = 0;; ++round)
        {
            if (!optimize())
            {
                result.status = LpStatus::Unbounded;
                result.iterations = iterations_;
                return result;
            }

            refactor();
            computeXB();
            computeY();
            if (!findEntering(false).has_value())
                break;
            if (round == 3)
                throw LpNumericalError("simplex failed to settle at an optimum");
        }

        fillResult(result);
        return result;
    }

private:
    struct Entering
    {
        int var;
        double dir;
        double reducedCost;
    };

    template <typename Fn> void forColumn(int j, Fn &&fn) const
    {
        if (j < n_)
        {
            auto const &col = lp_.column(j);
            for (int i = 0; i != m_; ++i)
                if (col[i] != 0.0)
                    fn(i, col[i]);
        }
        else if (j < n_ + m_)
            fn(j - n_, sigma_[j - n_]);
        else
            fn(j - n_ - m_, tau_[j - n_ - m_]);
    }

    void coldStart()
    {
        for (int i = 0; i != m_; ++i)
            upper_[n_ + m_ + i] = LP_INF;

        head_.assign(m_, -1);
        for (int i = 0; i != m_; ++i)
        {
            auto const b = lp_.rhs(i);
            auto const value = sigma_[i] * b;
            auto const logical = n_ + i;
            if (value >= -PRIMAL_TOL && value <= upper_[logical] + PRIMAL_TOL)
                head_[i] = logical;
            else
            {
                tau_[i] = b >= 0 ? 1.0 : -1.0;
                head_[i] = n_ + m_ + i;
            }
        }
        std::fill(pos_.begin(), pos_.end(), -1);
        std::fill(atUpper_.begin(), atUpper_.end(), 0);
        for (int i = 0; i != m_; ++i)
            pos_[head_[i]] = i;

        if (!refactor())
            throw LpNumericalError("initial basis is singular");
        computeXB();
    }

    bool tryWarmStart(std::vector<int> const &basis)
    {
        if (static_cast<int>(basis.size()) != m_)
            return false;

        std::vector<char> seen(n_ + m_, 0);
        for (auto const j : basis)
        {
            if (j < 0 || j >= n_ + m_ || seen[j])
                return false;
            seen[j] = 1;
        }

        head_ = basis;
        std::fill(pos_.begin(), pos_.end(), -1);
        std::fill(atUpper_.begin(), atUpper_.end(), 0);
        for (int i = 0; i != m_; ++i)
            pos_[head_[i]] = i;
        for (int i = 0; i != m_; ++i)
            upper_[n_ + m_ + i] = 0.0;

        if (!refactor())
            return false;
        computeXB();

        for (int i = 0; i != m_; ++i)
            if (xB_[i] < -PRIMAL_TOL || xB_[i] > upper_[head_[i]] + PRIMAL_TOL)
                return false;
        return true;
    }

    // Gauss-Jordan inversion of the basis matrix.
    bool refactor()
    {
        std::vector<double> basis(static_cast<size_t>(m_) * m_, 0.0);
        for (int k = 0; k != m_; ++k)
            forColumn(head_[k], [&](int i, double v) { basis[i * m_ + k] = v; });

        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int i = 0; i != m_; ++i)
            binv_[i * m_ + i] = 1.0;

        for (int col = 0; col != m_; ++col)
        {
            int pivot = col;
            for (int r = col + 1; r != m_; ++r)
                if (std::abs(basis[r * m_ + col]) > std::abs(basis[pivot * m_ + col]))
                    pivot = r;
            if (std::abs(basis[pivot * m_ + col]) < SINGULAR_TOL)
                return false;

            if (pivot != col)
                for (int k = 0; k != m_; ++k)
                {
                    std::swap(basis[pivot * m_ + k], basis[col * m_ + k]);
                    std::swap(binv_[pivot * m_ + k], binv_[col * m_ + k]);
                }

            auto const inv = 1.0 / basis[col * m_ + col];
            for (int k = 0; k != m_; ++k)
            {
                basis[col * m_ + k] *= inv;
                binv_[col * m_ + k] *= inv;
            }

            for (int r = 0; r != m_; ++r)
            {
                auto const factor = basis[r * m_ + col];
                if (r == col || factor == 0.0)
                    continue;
                for (int k = 0; k != m_; ++k)
                {
                    basis[r * m_ + k] -= factor * basis[col * m_ + k];
                    binv_[r * m_ + k] -= factor * binv_[col * m_ + k];
                }
            }
        }

        sinceRefactor_ = 0;
        return true;
    }

    void computeXB()
    {
        std::vector<double> rhs(m_);
        for (int i = 0; i != m_; ++i)
            rhs[i] = lp_.rhs(i);
        for (int j = 0; j != n_ + 2 * m_; ++j)
            if (pos_[j] < 0 && atUpper_[j])
                forColumn(j, [&](int i, double v) { rhs[i] -= v * upper_[j]; });

        xB_.assign(m_, 0.0);
        for (int i = 0; i != m_; ++i)
        {
            double sum = 0;
            for (int k = 0; k != m_; ++k)
                sum += binv_[i * m_ + k] * rhs[k];
            xB_[i] = sum;
        }
    }

    void computeY()
    {
        y_.assign(m_, 0.0);
        for (int i = 0; i != m_; ++i)
        {
            auto const cb = cost_[head_[i]];
            if (cb == 0.0)
                continue;
            for (int k = 0; k != m_; ++k)
                y_[k] += cb * binv_[i * m_ + k];
        }
    }

    double reducedCost(int j) const
    {
        double d = cost_[j];
        forColumn(j, [&](int i, double v) { d -= y_[i] * v; });
        return d;
    }

    std::optional<Entering> findEntering(bool bland) const
    {
        std::optional<Entering> best;
        double bestScore = 0;
        for (int j = 0; j != n_ + 2 * m_; ++j)
        {
            if (pos_[j] >= 0 || upper_[j] <= 0.0)
                continue;

            auto const d = reducedCost(j);
            double dir = 0;
            if (!atUpper_[j] && d < -DUAL_TOL)
                dir = 1.0;
            else if (atUpper_[j] && d > DUAL_TOL)
                dir = -1.0;
            else
                continue;

            if (bland)
                return Entering{j, dir, d};
            if (std::abs(d) > bestScore)
            {
                bestScore = std::abs(d);
                best = Entering{j, dir, d};
            }
        }
        return best;
    }

    // Runs the simplex with the current costs. Returns false when unbounded.
    bool optimize()
    {
        bool bland = false;
        long stalled = 0;
        auto const stallLimit = 3L * (m_ + n_);
        std::vector<double> alpha(m_);

        while (true)
        {
            if (iterations_ >= maxIterations_)
                throw LpNumericalError("simplex iteration limit reached");

            if (sinceRefactor_ >= options_.refactorInterval)
            {
                if (!refactor())
                    throw LpNumericalError("basis became singular");
                computeXB();
            }

            computeY();
            auto const entering = findEntering(bland);
            if (!entering)
                return true;

            auto const q = entering->var;
            auto const dir = entering->dir;

            std::fill(alpha.begin(), alpha.end(), 0.0);
            forColumn(q, [&](int k, double v) {
                for (int i = 0; i != m_; ++i)
                    alpha[i] += binv_[i * m_ + k] * v;
            });

            double theta = upper_[q];
            int leave = -1;
            double leaveAlpha = 0;
            for (int i = 0; i != m_; ++i)
            {
                auto const a = dir * alpha[i];
                auto const ub = upper_[head_[i]];
                double t;
                if (a > PIVOT_TOL)
                    t = std::max(xB_[i], 0.0) / a;
                else if (a < -PIVOT_TOL && ub < LP_INF)
                    t = std::max(ub - xB_[i], 0.0) / -a;
                else
                    continue;

                bool take = t < theta - 1e-12;
                if (!take && leave >= 0 && t <= theta + 1e-12)
                    take = bland ? head_[i] < head_[leave]
                                 : std::abs(a) > std::abs(leaveAlpha);
                if (take)
                {
                    theta = std::min(t, theta);
                    leave = i;
                    leaveAlpha = a;
                }
            }

            if (theta == LP_INF)
                return false;

            ++iterations_;
            ++sinceRefactor_;
            for (int i = 0; i != m_; ++i)
                xB_[i] -= theta * dir * alpha[i];

            auto const progress = theta * std::abs(entering->reducedCost);
            if (progress > 1e-12)
            {
                stalled = 0;
                bland = false;
            }
            else if (++stalled >= stallLimit)
                bland = true;

            if (leave < 0)
            {
                atUpper_[q] = !atUpper_[q];
                continue;
            }

            auto const out = head_[leave];
            auto const enteringValue = dir > 0 ? theta : upper_[q] - theta;
            atUpper_[out] = leaveAlpha < 0 ? 1 : 0;
            if (upper_[out] <= 0.0)
                atUpper_[out] = 0;

            auto const pivot = alpha[leave];
            if (std::abs(pivot) < SINGULAR_TOL)
                throw LpNumericalError("pivot element too small");

            auto *pivotRow = &binv_[static_cast<size_t>(leave) * m_];
            for (int k = 0; k != m_; ++k)
                pivotRow[k] /= pivot;
            for (int i = 0; i != m_; ++i)
            {
                if (i == leave || alpha[i] == 0.0)
                    continue;
                auto const factor = alpha[i];
                auto *row = &binv_[static_cast<size_t>(i) * m_];
                for (int k = 0; k != m_; ++k)
                    row[k] -= factor * pivotRow[k];
            }

            head_[leave] = q;
            pos_[q] = leave;
            pos_[out] = -1;
            atUpper_[q] = 0;
            xB_[leave] = enteringValue;
        }
    }

    void fillResult(LpResult &result)
    {
        std::vector<double> value(n_ + 2 * m_, 0.0);
        for (int j = 0; j != n_ + 2 * m_; ++j)
            if (pos_[j] < 0 && atUpper_[j])
                value[j] = upper_[j];
        for (int i = 0; i != m_; ++i)
            value[head_[i]] = xB_[i];

        // Residual and bound checks on the final point.
        double scale = 1;
        for (int i = 0; i != m_; ++i)
            scale = std::max(scale, std::abs(lp_.rhs(i)));
        std::vector<double> residual(m_);
        for (int i = 0; i != m_; ++i)
            residual[i] = -lp_.rhs(i);
        for (int j = 0; j != n_ + 2 * m_; ++j)
        {
            if (value[j] == 0.0)
                continue;
            if (value[j] < -1e-7 * scale || value[j] > upper_[j] + 1e-7 * scale)
                throw LpNumericalError("final solution violates a variable bound");
            forColumn(j, [&](int i, double v) { residual[i] += v * value[j]; });
        }
        for (int i = 0; i != m_; ++i)
            if (std::abs(residual[i]) > 1e-7 * scale)
                throw LpNumericalError("final solution fails the residual check");

        result.status = LpStatus::Optimal;
        result.iterations = iterations_;
        result.x.assign(n_, 0.0);
        result.objective = 0;
        for (int j = 0; j != n_; ++j)
        {
            result.x[j] = std::clamp(value[j], 0.0, upper_[j]);
            result.objective += lp_.cost(j) * result.x[j];
        }
        result.duals = y_;
        result.reducedCosts.assign(n_, 0.0);
        for (int j = 0; j != n_; ++j)
            result.reducedCosts[j] = reducedCost(j);

        result.basis.clear();
        bool artificial = false;
        for (int i = 0; i != m_; ++i)
            artificial = artificial || head_[i] >= n_ + m_;
        if (!artificial)
            result.basis = head_;
    }

    LinearProgram const &lp_;
    int m_;
    int n_;
    LpOptions options_;
    std::vector<double> sigma_;
    std::vector<double> tau_;
    std::vector<double> cost_;
    std::vector<double> upper_;
    std::vector<int> head_;
    std::vector<int> pos_;
    std::vector<char> atUpper_;
    std::vector<double> binv_;
    std::vector<double> xB_;
    std::vector<double> y_;
    long iterations_ = 0;
    long maxIterations_ = 0;
    int sinceRefactor_ = 0;
};
}  // namespace

LpResult splitpd::solveLp(LinearProgram const &lp,
                          LpOptions const &options,
                          std::vector<int> const *warmBasis)
{
    Simplex simplex(lp, options);
    return simplex.run(warmBasis);
}
