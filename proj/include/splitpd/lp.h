#ifndef SPLITPD_LP_H
#define SPLITPD_LP_H

#include <limits>
#include <stdexcept>
#include <vector>

namespace splitpd
{
inline constexpr double LP_INF = std::numeric_limits<double>::infinity();

enum class RowSense
{
    Equal,
    GreaterEqual,
    LessEqual,
};

/**
 * min c'x  s.t.  A x (sense) b,  0 <= x <= ub.  Columns are stored densely.
 */
class LinearProgram
{
public:
    explicit LinearProgram(int numRows = 0);

    int numRows() const noexcept { return static_cast<int>(rhs_.size()); }
    int numCols() const noexcept { return static_cast<int>(cost_.size()); }

    /// Appends a row; existing columns get a zero coefficient. Returns its index.
    int addRow(RowSense sense, double rhs);

    /// Appends a column with dense coefficients. Returns its index.
    int addColumn(double cost, std::vector<double> coefficients, double upper = LP_INF);

    void setRhs(int row, double rhs) { rhs_[row] = rhs; }
    void setCost(int col, double cost) { cost_[col] = cost; }
    void setUpper(int col, double upper) { upper_[col] = upper; }
    void setCoefficient(int row, int col, double value) { cols_[col][row] = value; }

    double rhs(int row) const { return rhs_[row]; }
    RowSense sense(int row) const { return sense_[row]; }
    double cost(int col) const { return cost_[col]; }
    double upper(int col) const { return upper_[col]; }
    std::vector<double> const &column(int col) const { return cols_[col]; }

private:
    std::vector<double> rhs_;
    std::vector<RowSense> sense_;
    std::vector<double> cost_;
    std::vector<double> upper_;
    std::vector<std::vector<double>> cols_;
};

enum class LpStatus
{
    Optimal,
    Infeasible,
    Unbounded,
};

char const *toString(LpStatus status);

class LpNumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct LpResult
{
    LpStatus status = LpStatus::Infeasible;
    double objective = 0;
    std::vector<double> x;
    std::vector<double> duals;          // d objective / d rhs
    std::vector<double> reducedCosts;
    long iterations = 0;

    /// Basic variables on exit (columns, then row logicals as numCols + row).
    /// Empty when an artificial variable stayed basic.
    std::vector<int> basis;
};

struct LpOptions
{
    int refactorInterval = 100;
    long maxIterations = -1;  // negative: automatic
};

/**
 * Two-phase bounded-variable primal revised simplex with an explicit basis
 * inverse. Dantzig pricing; Bland's rule takes over after 3 (rows + cols)
 * consecutive pivots without objective progress. ``warmBasis`` (as returned in
 * LpResult::basis) skips phase 1 when it is still primal feasible.
 *
 * Throws LpNumericalError when the basis becomes singular or the final
 * solution fails the residual check.
 */
LpResult solveLp(LinearProgram const &lp,
                 LpOptions const &options = {},
                 std::vector<int> const *warmBasis = nullptr);
}  // namespace splitpd

#endif  // SPLITPD_LP_H
