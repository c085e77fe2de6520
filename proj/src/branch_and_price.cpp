#include "splitpd/branch_and_price.h"

#include "splitpd/ils.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace splitpd
{
namespace
{
using Clock = std::chrono::steady_clock;

constexpr double INT_TOL = 1e-6;
constexpr double BOUND_TOL = 1e-6;
constexpr double RC_TOL = 1e-6;

double fractionality(double value)
{
    double const frac = value - std::floor(value);
    return std::min(frac, 1 - frac);
}

struct Node
{
    std::vector<BranchRow> rows;
    double bound = -INF_DISTANCE;
    long id = 0;
};

struct NodeOrder
{
    bool operator()(Node const &a, Node const &b) const
    {
        if (a.bound != b.bound)
            return a.bound > b.bound;
        return a.id > b.id;
    }
};

struct VisitsLess
{
    bool operator()(std::vector<Visit> const &a, std::vector<Visit> const &b) const
    {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](Visit const &x, Visit const &y) {
                                                return std::pair(x.vertex, x.amount)
                                                       < std::pair(y.vertex, y.amount);
                                            });
    }
};

struct NodeSolve
{
    bool feasible = false;
    bool timedOut = false;
    double bound = 0;
    std::vector<double> lambda;  // per pool column
    std::vector<double> duals;
};

class Solver
{
public:
    Solver(Instance const &inst, BpParams const &params)
        : inst_(inst), params_(params), start_(Clock::now())
    {
    }

    BpResult run();

private:
    double elapsed() const
    {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

    bool outOfTime() const { return elapsed() > params_.timeLimit; }

    void addToPool(Column column)
    {
        if (poolKeys_.insert(column.visits).second)
            pool_.push_back(std::move(column));
    }

    bool inPool(Column const &column) const { return poolKeys_.contains(column.visits); }

    void setIncumbent(Solution sol)
    {
        upperBound_ = sol.cost();
        best_ = std::move(sol);
        maxLength_ = std::min(inst_.maxLength(), upperBound_ + BOUND_TOL);
        if (params_.preprocessing && inst_.isMetric())
            filter_ = ExtensionFilter(inst_, maxLength_);
    }

    std::vector<double> columnCoefficients(Column const &column, Node const &node) const
    {
        int const n = inst_.numPairs();
        std::vector<double> coefs(n + 1 + node.rows.size(), 0);
        for (int i = 1; i <= n; ++i)
            coefs[i - 1] = column.coverage[i];
        coefs[n] = 1;
        for (size_t k = 0; k != node.rows.size(); ++k)
            coefs[n + 1 + k] = node.rows[k].coefficient(column);
        return coefs;
    }

    PricingDuals toPricingDuals(std::vector<double> const &duals, Node const &node) const
    {
        int const n = inst_.numPairs();
        PricingDuals result(n);
        for (int i = 1; i <= n; ++i)
            result.pair[i] = duals[i - 1];
        result.vehicle = duals[n];

        for (size_t k = 0; k != node.rows.size(); ++k)
        {
            BranchRow const &row = node.rows[k];
            double const dual = duals[n + 1 + k];
            switch (row.rule)
            {
                case BranchRule::Vehicles:
                    result.vehicle += dual;
                    break;
                case BranchRule::PickupDegree:
                    result.pickupVisit[row.pickup] += dual;
                    break;
                case BranchRule::Edge:
                    result.edge[{row.leg.from, row.leg.to}] += dual;
                    break;
                case BranchRule::LoadedEdge:
                    result.loadedEdge[row.leg] += dual;
                    break;
            }
        }

        return result;
    }

    NodeSolve solveNode(Node const &node);
    void log(long nodeCount, size_t open, double lowerBound) const;

    Instance const &inst_;
    BpParams const &params_;
    Clock::time_point start_;

    std::vector<Column> pool_;
    std::set<std::vector<Visit>, VisitsLess> poolKeys_;
    std::optional<Solution> best_;
    double upperBound_ = INF_DISTANCE;
    Distance maxLength_ = INF_DISTANCE;
    std::optional<ExtensionFilter> filter_;
    long pricingCalls_ = 0;
};

NodeSolve Solver::solveNode(Node const &node)
{
    int const n = inst_.numPairs();

    LinearProgram lp(0);
    for (int i = 1; i <= n; ++i)
        lp.addRow(RowSense::Equal, inst_.demand(i));
    lp.addRow(RowSense::LessEqual, inst_.numVehicles());
    for (auto const &row : node.rows)
        lp.addRow(row.sense, row.rhs);

    int const numRows = lp.numRows();
    std::vector<int> artificials;
    for (int r = 0; r != numRows; ++r)
    {
        bool const needs = r < n
                           || (r > n && node.rows[r - n - 1].sense != RowSense::LessEqual);
        if (!needs)
            continue;

        std::vector<double> coefs(numRows, 0);
        coefs[r] = 1;
        artificials.push_back(lp.addColumn(1, std::move(coefs)));
    }

    int const firstReal = lp.numCols();
    for (auto const &column : pool_)
        lp.addColumn(0, columnCoefficients(column, node));

    int phase = 1;
    double alpha = 0;
    std::vector<double> previous;
    std::vector<int> basis;
    NodeSolve result;

    while (true)
    {
        if (outOfTime())
        {
            result.timedOut = true;
            return result;
        }

        LpResult const lpResult = solveLp(lp, {}, basis.empty() ? nullptr : &basis);
        if (lpResult.status != LpStatus::Optimal)
            throw std::logic_error("restricted master not solved to optimality");
        basis = lpResult.basis;

        if (phase == 1 && lpResult.objective <= 1e-7)
        {
            phase = 2;
            for (int a : artificials)
            {
                lp.setUpper(a, 0);
                lp.setCost(a, 0);
            }
            for (size_t c = 0; c != pool_.size(); ++c)
                lp.setCost(firstReal + static_cast<int>(c), pool_[c].cost);
            alpha = params_.alpha;
            previous.clear();
            continue;
        }

        double const costFactor = phase == 2 ? 1.0 : 0.0;
        std::vector<double> const &duals = lpResult.duals;
        PricingDuals const trueDuals = toPricingDuals(duals, node);

        bool const smoothing = phase == 2 && alpha > 0 && !previous.empty();
        std::vector<double> mixed = duals;
        if (smoothing)
            for (size_t r = 0; r != mixed.size(); ++r)
                mixed[r] = alpha * previous[r] + (1 - alpha) * duals[r];

        PricingOptions options;
        options.costFactor = costFactor;
        options.maxLength = maxLength_;
        options.filter = filter_ ? &*filter_ : nullptr;
        options.scale = params_.scale;
        options.deadline = start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(params_.timeLimit));

        CascadeResult cascade;
        try
        {
            cascade = priceCascade(toPricingDuals(mixed, node), inst_, options);
        }
        catch (PricingTimeout const &)
        {
            result.timedOut = true;
            return result;
        }
        ++pricingCalls_;

        auto freshColumns = [&](std::vector<Column> const &candidates) {
            std::vector<Column> fresh;
            for (auto const &column : candidates)
                if (!inPool(column) && reducedCost(column, trueDuals, costFactor) < -RC_TOL)
                    fresh.push_back(column);
            return fresh;
        };

        std::vector<Column> fresh = freshColumns(cascade.columns);
        previous = duals;

        if (fresh.empty() && smoothing)
        {
            alpha = std::max(0.0, alpha - params_.alphaStep);
            if (alpha < 1e-9)
                alpha = 0;
            continue;
        }

        if (fresh.empty() && !cascade.proven)
        {
            // A heuristic stage only returned known columns: confirm with the
            // exact stage before declaring convergence.
            options.dominance = Dominance::Full;
            options.bucketLimit = -1;
            try
            {
                fresh = freshColumns(priceExact(trueDuals, inst_, options).columns);
            }
            catch (PricingTimeout const &)
            {
                result.timedOut = true;
                return result;
            }
        }

        if (!fresh.empty())
        {
            int const oldCols = lp.numCols();
            for (auto &column : fresh)
            {
                lp.addColumn(phase == 2 ? column.cost : 0, columnCoefficients(column, node));
                addToPool(std::move(column));
            }

            int const added = lp.numCols() - oldCols;
            for (int &b : basis)
                if (b >= oldCols)
                    b += added;
            continue;
        }

        if (phase == 1)
            return result;

        result.feasible = true;
        result.bound = lpResult.objective;
        result.duals = lpResult.duals;
        result.lambda.assign(pool_.size(), 0);
        for (size_t c = 0; c != pool_.size(); ++c)
            result.lambda[c] = lpResult.x[firstReal + c];
        return result;
    }
}

void Solver::log(long nodeCount, size_t open, double lowerBound) const
{
    if (!params_.log)
        return;

    *params_.log << "node=" << nodeCount << " open=" << open << " LB=" << lowerBound << " UB=";
    if (best_)
        *params_.log << upperBound_;
    else
        *params_.log << "inf";
    *params_.log << " cols=" << pool_.size() << " t=" << elapsed() << '\n';
}

BpResult Solver::run()
{
    BpResult result;
    maxLength_ = inst_.maxLength();
    if (params_.preprocessing && inst_.isMetric())
        filter_ = ExtensionFilter(inst_, maxLength_);

    if (params_.warmStart)
    {
        auto const eval = evaluateSolution(*params_.warmStart, inst_);
        if (!eval.feasible)
            throw std::invalid_argument("warm start solution is infeasible");
        setIncumbent(*params_.warmStart);
    }
    else
    {
        IlsParams ils;
        ils.maxIterations = 5;
        ils.timeLimit = std::max(0.1, params_.timeLimit / 10);
        try
        {
            setIncumbent(runIls(inst_, ils).best);
        }
        catch (std::runtime_error const &)
        {
            if (!inst_.hasDistanceLimit())
                throw std::invalid_argument(
                    "branch-and-price needs a finite distance limit or a feasible warm start");
        }
    }

    if (best_)
        for (auto const &route : best_->routes)
            addToPool(makeColumn(route.visits(), inst_));

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{});
    long nextId = 1;
    bool incomplete = false;
    double incompleteBound = INF_DISTANCE;
    bool stopped = false;

    auto globalBound = [&](double extra) {
        double bound = std::min(extra, incompleteBound);
        if (!open.empty())
            bound = std::min(bound, open.top().bound);
        return std::min(bound, upperBound_);
    };

    while (!open.empty())
    {
        if (outOfTime())
        {
            result.status = BpStatus::TimeLimit;
            stopped = true;
            break;
        }
        if (params_.nodeLimit >= 0 && result.nodes >= params_.nodeLimit)
        {
            result.status = BpStatus::NodeLimit;
            stopped = true;
            break;
        }

        Node node = open.top();
        open.pop();
        if (node.bound >= upperBound_ - BOUND_TOL)
            continue;

        NodeSolve const solved = solveNode(node);
        if (solved.timedOut)
        {
            open.push(node);
            result.status = BpStatus::TimeLimit;
            stopped = true;
            break;
        }

        ++result.nodes;
        if (node.id == 0)
        {
            result.rootBound = solved.feasible ? solved.bound : INF_DISTANCE;
            if (solved.feasible)
                result.rootDuals = toPricingDuals(solved.duals, node);
        }

        if (!solved.feasible || solved.bound >= upperBound_ - BOUND_TOL)
        {
            log(result.nodes, open.size(), globalBound(INF_DISTANCE));
            continue;
        }

        bool integral = true;
        for (double value : solved.lambda)
            if (fractionality(value) > INT_TOL)
            {
                integral = false;
                break;
            }

        if (integral)
        {
            Solution sol;
            for (size_t c = 0; c != pool_.size(); ++c)
                for (long k = std::lround(solved.lambda[c]); k > 0; --k)
                    sol.routes.emplace_back(pool_[c].visits, inst_);

            if (!evaluateSolution(sol, inst_).feasible)
                throw std::logic_error("integral master solution is infeasible");
            if (sol.cost() < upperBound_ - BOUND_TOL)
                setIncumbent(std::move(sol));

            log(result.nodes, open.size(), globalBound(INF_DISTANCE));
            continue;
        }

        auto const branch = chooseBranching(pool_, solved.lambda, inst_);
        if (!branch)
        {
            incomplete = true;
            incompleteBound = std::min(incompleteBound, solved.bound);
            log(result.nodes, open.size(), globalBound(INF_DISTANCE));
            continue;
        }

        for (auto const &row : {branch->first, branch->second})
        {
            Node child;
            child.rows = node.rows;
            child.rows.push_back(row);
            child.bound = solved.bound;
            child.id = nextId++;
            open.push(std::move(child));
        }

        log(result.nodes, open.size(), globalBound(solved.bound));
    }

    if (!stopped)
    {
        if (incomplete)
            result.status = BpStatus::BranchingIncomplete;
        else
            result.status = best_ ? BpStatus::Optimal : BpStatus::Infeasible;
    }

    result.best = best_;
    result.upperBound = upperBound_;
    result.lowerBound = best_ || !open.empty() || incomplete ? globalBound(INF_DISTANCE) : INF_DISTANCE;
    result.columns = pool_.size();
    result.pricingCalls = pricingCalls_;
    result.elapsed = elapsed();
    return result;
}
}  // namespace

std::optional<std::pair<BranchRow, BranchRow>> chooseBranching(std::vector<Column> const &columns,
                                                               std::vector<double> const &lambda,
                                                               Instance const &inst)
{
    if (std::all_of(lambda.begin(), lambda.end(), [](double v) { return fractionality(v) <= INT_TOL; }))
        throw std::invalid_argument("branching requires a fractional master solution");

    double vehicles = 0;
    std::map<int, double> degree;
    std::map<std::pair<int, int>, double> edges;
    std::map<Leg, double> loadedEdges;

    for (size_t c = 0; c != columns.size(); ++c)
    {
        double const value = lambda[c];
        if (value <= 1e-12)
            continue;

        Column const &column = columns[c];
        vehicles += value;
        for (int i = 1; i <= inst.numPairs(); ++i)
            if (column.pickupVisits[i])
                degree[i] += value * column.pickupVisits[i];
        for (auto const &leg : column.legs)
        {
            edges[{leg.from, leg.to}] += value;
            loadedEdges[leg] += value;
        }
    }

    auto branchOn = [](BranchRow row, double value) {
        BranchRow down = row;
        down.sense = RowSense::LessEqual;
        down.rhs = std::floor(value);
        BranchRow up = row;
        up.sense = RowSense::GreaterEqual;
        up.rhs = std::ceil(value);
        return std::make_pair(down, up);
    };

    auto mostFractional = [](auto const &values) {
        auto chosen = values.end();
        double best = INT_TOL;
        for (auto it = values.begin(); it != values.end(); ++it)
            if (double const frac = fractionality(it->second); frac > best + 1e-12)
            {
                best = frac;
                chosen = it;
            }
        return chosen;
    };

    if (fractionality(vehicles) > INT_TOL)
        return branchOn(BranchRow{BranchRule::Vehicles, 0, {}, {}, 0}, vehicles);

    if (auto it = mostFractional(degree); it != degree.end())
        return branchOn(BranchRow{BranchRule::PickupDegree, it->first, {}, {}, 0}, it->second);

    if (auto it = mostFractional(edges); it != edges.end())
        return branchOn(BranchRow{BranchRule::Edge, 0, Leg{it->first.first, it->first.second, 0, 0}, {}, 0},
                        it->second);

    if (auto it = mostFractional(loadedEdges); it != loadedEdges.end())
        return branchOn(BranchRow{BranchRule::LoadedEdge, 0, it->first, {}, 0}, it->second);

    return std::nullopt;
}

double BranchRow::coefficient(Column const &column) const
{
    switch (rule)
    {
        case BranchRule::Vehicles:
            return 1;
        case BranchRule::PickupDegree:
            return column.pickupVisits[pickup];
        case BranchRule::Edge:
            return static_cast<double>(std::count_if(column.legs.begin(), column.legs.end(), [&](Leg const &l) {
                return l.from == leg.from && l.to == leg.to;
            }));
        case BranchRule::LoadedEdge:
            return static_cast<double>(std::count(column.legs.begin(), column.legs.end(), leg));
    }
    return 0;
}

char const *toString(BpStatus status)
{
    switch (status)
    {
        case BpStatus::Optimal:
            return "optimal";
        case BpStatus::Infeasible:
            return "infeasible";
        case BpStatus::TimeLimit:
            return "time_limit";
        case BpStatus::NodeLimit:
            return "node_limit";
        case BpStatus::BranchingIncomplete:
            return "branching_incomplete";
    }
    return "unknown";
}

double BpResult::gap() const
{
    if (!best)
        return INF_DISTANCE;
    if (upperBound <= 0)
        return 0;
    return std::max(0.0, 100 * (upperBound - lowerBound) / upperBound);
}

BpResult branchAndPrice(Instance const &inst, BpParams const &params)
{
    Solver solver(inst, params);
    return solver.run();
}
}  // namespace splitpd
