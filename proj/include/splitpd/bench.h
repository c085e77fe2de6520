#ifndef SPLITPD_BENCH_H
#define SPLITPD_BENCH_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace splitpd
{
enum class Algorithm
{
    Ils,
    Bp,
    Oracle,
};

char const *toString(Algorithm algo);
std::optional<Algorithm> parseAlgorithm(std::string const &text);

struct RunConfig
{
    Algorithm algo = Algorithm::Ils;
    double timeLimit = 10;
    std::uint64_t seed = 0;
    long maxIterations = -1;  // ILS only; negative: none
    bool useRcsp = true;      // ILS only
    int scale = 1;            // branch-and-price only
    std::optional<Solution> warmStart;  // branch-and-price only
    std::ostream *log = nullptr;
};

struct RunRecord
{
    std::string instance;
    Algorithm algo = Algorithm::Ils;
    std::uint64_t seed = 0;
    std::string status;
    double cost = INF_DISTANCE;
    std::optional<double> lowerBound;
    double time = 0;
    size_t visits = 0;
    size_t splits = 0;
    size_t pairs = 0;
    std::optional<Solution> solution;
};

/// Runs one solver on one instance. Oracle size refusals propagate.
RunRecord solveInstance(Instance const &inst, std::string const &name, RunConfig const &config);

std::string csvHeader();

/// One CSV line (no newline). The time field can be left out for comparisons.
std::string csvRow(RunRecord const &record, bool withTime = true);

struct InstanceSummary
{
    std::string instance;
    size_t runs = 0;
    double best = INF_DISTANCE;
    double average = INF_DISTANCE;
    std::optional<double> bks;
    double gap = 0;     // mean per-run gap against the BKS, or against Best without one
    double stdDev = 0;  // population standard deviation of the per-run gaps
    double splitShare = 0;  // split pairs over all pairs, averaged over runs
};

/// Groups records per instance in first-appearance order.
std::vector<InstanceSummary> summarize(std::vector<RunRecord> const &records,
                                       std::map<std::string, double> const &bks = {});

/// Markdown table with the Best, Avg, Gap(%) and StdDev(%) columns.
std::string markdownTable(std::vector<InstanceSummary> const &summaries);

/// Two-column CSV "instance,cost"; a header line is skipped when present.
std::map<std::string, double> readBks(std::filesystem::path const &path);

/// Worker cap from SPLITPD_THREADS (default: hardware concurrency, at least 1).
unsigned threadsFromEnvironment();

struct BenchInstance
{
    std::string name;
    Instance instance;
};

/**
 * Runs every (instance, seed) combination on a pool of ``threads`` workers.
 * Records come back ordered by instance, then seed, whatever the schedule.
 */
std::vector<RunRecord> runBench(std::vector<BenchInstance> const &instances,
                                RunConfig const &config,
                                std::vector<std::uint64_t> const &seeds,
                                unsigned threads);
}  // namespace splitpd

#endif  // SPLITPD_BENCH_H
