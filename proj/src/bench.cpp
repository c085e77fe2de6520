#include "splitpd/bench.h"

#include "splitpd/branch_and_price.h"
#include "splitpd/ils.h"
#include "splitpd/instance_io.h"
#include "splitpd/oracle.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace splitpd
{
namespace
{
std::string fixed(double value, int digits)
{
    if (!std::isfinite(value))
        return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

void fillSolution(RunRecord &record, Solution const &sol, Instance const &inst)
{
    record.cost = sol.cost();
    record.visits = customerVisits(sol);
    record.splits = splitPairs(sol, inst);
    record.solution = sol;
}
}  // namespace

char const *toString(Algorithm algo)
{
    switch (algo)
    {
        case Algorithm::Ils:
            return "ils";
        case Algorithm::Bp:
            return "bp";
        case Algorithm::Oracle:
            return "oracle";
    }
    return "unknown";
}

std::optional<Algorithm> parseAlgorithm(std::string const &text)
{
    for (auto algo : {Algorithm::Ils, Algorithm::Bp, Algorithm::Oracle})
        if (text == toString(algo))
            return algo;
    return std::nullopt;
}

RunRecord solveInstance(Instance const &inst, std::string const &name, RunConfig const &config)
{
    RunRecord record;
    record.instance = name;
    record.algo = config.algo;
    record.seed = config.seed;
    record.pairs = static_cast<size_t>(inst.numPairs());

    auto const start = std::chrono::steady_clock::now();

    switch (config.algo)
    {
        case Algorithm::Ils:
        {
            IlsParams params;
            params.seed = config.seed;
            params.timeLimit = config.timeLimit;
            params.maxIterations = config.maxIterations;
            params.useRcsp = config.useRcsp;
            auto const result = runIls(inst, params);
            fillSolution(record, result.best, inst);
            record.status = "feasible";
            break;
        }
        case Algorithm::Bp:
        {
            BpParams params;
            params.timeLimit = config.timeLimit;
            params.warmStart = config.warmStart;
            params.scale = config.scale;
            params.log = config.log;
            auto const result = branchAndPrice(inst, params);
            if (result.best)
                fillSolution(record, *result.best, inst);
            record.lowerBound = result.lowerBound;
            record.status = toString(result.status);
            break;
        }
        case Algorithm::Oracle:
        {
            auto const result = bruteForceOptimum(inst);
            if (result.best)
            {
                fillSolution(record, *result.best, inst);
                record.lowerBound = result.cost;
                record.status = "optimal";
            }
            else
                record.status = "infeasible";
            break;
        }
    }

    record.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::string csvHeader()
{
    return "instance,algo,seed,cost,lb,time,visits,splits,status";
}

std::string csvRow(RunRecord const &record, bool withTime)
{
    std::ostringstream out;
    out << record.instance << ',' << toString(record.algo) << ',' << record.seed << ','
        << formatDouble(record.cost) << ',';
    if (record.lowerBound)
        out << formatDouble(*record.lowerBound);
    out << ',';
    if (withTime)
        out << fixed(record.time, 3);
    out << ',' << record.visits << ',' << record.splits << ',' << record.status;
    return out.str();
}

std::vector<InstanceSummary> summarize(std::vector<RunRecord> const &records,
                                       std::map<std::string, double> const &bks)
{
    std::vector<InstanceSummary> summaries;
    std::vector<std::vector<RunRecord const *>> groups;

    for (auto const &record : records)
    {
        auto it = std::find_if(summaries.begin(), summaries.end(),
                               [&](InstanceSummary const &s) { return s.instance == record.instance; });
        if (it == summaries.end())
        {
            summaries.push_back({});
            summaries.back().instance = record.instance;
            groups.emplace_back();
            it = summaries.end() - 1;
        }
        groups[it - summaries.begin()].push_back(&record);
    }

    for (size_t g = 0; g != summaries.size(); ++g)
    {
        auto &summary = summaries[g];
        auto const &group = groups[g];
        summary.runs = group.size();

        double total = 0;
        double splitShare = 0;
        for (auto const *record : group)
        {
            summary.best = std::min(summary.best, record->cost);
            total += record->cost;
            if (record->pairs)
                splitShare += static_cast<double>(record->splits) / static_cast<double>(record->pairs);
        }
        summary.average = total / static_cast<double>(group.size());
        summary.splitShare = 100 * splitShare / static_cast<double>(group.size());

        if (auto it = bks.find(summary.instance); it != bks.end())
            summary.bks = it->second;

        double const reference = summary.bks.value_or(summary.best);
        if (!std::isfinite(reference) || reference <= 0)
            continue;

        std::vector<double> gaps;
        for (auto const *record : group)
            gaps.push_back(100 * (record->cost - reference) / reference);

        double mean = 0;
        for (double gap : gaps)
            mean += gap;
        mean /= static_cast<double>(gaps.size());

        double variance = 0;
        for (double gap : gaps)
            variance += (gap - mean) * (gap - mean);
        variance /= static_cast<double>(gaps.size());

        summary.gap = mean;
        summary.stdDev = std::sqrt(variance);
    }

    return summaries;
}

std::string markdownTable(std::vector<InstanceSummary> const &summaries)
{
    std::ostringstream out;
    out << "| Instance | Runs | BKS | Best | Avg | Gap(%) | StdDev(%) | Split(%) |\n";
    out << "|---|---|---|---|---|---|---|---|\n";

    double splitTotal = 0;
    for (auto const &s : summaries)
    {
        out << "| " << s.instance << " | " << s.runs << " | " << (s.bks ? fixed(*s.bks, 2) : "-")
            << " | " << fixed(s.best, 2) << " | " << fixed(s.average, 2) << " | " << fixed(s.gap, 2)
            << " | " << fixed(s.stdDev, 2) << " | " << fixed(s.splitShare, 2) << " |\n";
        splitTotal += s.splitShare;
    }

    if (!summaries.empty())
        out << "\nSplit-load share: " << fixed(splitTotal / static_cast<double>(summaries.size()), 2)
            << "% of pairs\n";

    return out.str();
}

std::map<std::string, double> readBks(std::filesystem::path const &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());

    std::map<std::string, double> bks;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (line.empty() || line[0] == '#')
            continue;

        auto const comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected instance,cost", lineNo);

        std::string const name = line.substr(0, comma);
        std::string const value = line.substr(comma + 1);
        char *end = nullptr;
        double const cost = std::strtod(value.c_str(), &end);
        if (end == value.c_str())
        {
            if (lineNo == 1)
                continue;  // header
            throw ParseError("invalid cost", lineNo);
        }
        bks[name] = cost;
    }

    return bks;
}

unsigned threadsFromEnvironment()
{
    if (char const *env = std::getenv("SPLITPD_THREADS"))
    {
        char *end = nullptr;
        long const value = std::strtol(env, &end, 10);
        if (end != env && value >= 1)
            return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunRecord> runBench(std::vector<BenchInstance> const &instances,
                                RunConfig const &config,
                                std::vector<std::uint64_t> const &seeds,
                                unsigned threads)
{
    size_t const total = instances.size() * seeds.size();
    std::vector<RunRecord> records(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<size_t> next = 0;

    auto worker = [&] {
        for (size_t job = next++; job < total; job = next++)
        {
            auto const &entry = instances[job / seeds.size()];
            RunConfig local = config;
            local.seed = seeds[job % seeds.size()];
            local.log = nullptr;
            try
            {
                records[job] = solveInstance(entry.instance, entry.name, local);
            }
            catch (...)
            {
                errors[job] = std::current_exception();
            }
        }
    };

    unsigned const count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
    if (count == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t != count; ++t)
            pool.emplace_back(worker);
        for (auto &thread : pool)
            thread.join();
    }

    for (auto const &error : errors)
        if (error)
            std::rethrow_exception(error);

    return records;
}
}  // namespace splitpd
