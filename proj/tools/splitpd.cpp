#include "splitpd/bench.h"
#include "splitpd/instance_io.h"
#include "splitpd/oracle.h"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace fs = std::filesystem;
using namespace splitpd;

namespace
{
std::vector<fs::path> expandInputs(std::vector<std::string> const &inputs)
{
    std::vector<fs::path> paths;
    for (auto const &input : inputs)
    {
        fs::path const path(input);
        if (fs::is_directory(path))
        {
            std::vector<fs::path> found;
            for (auto const &entry : fs::directory_iterator(path))
                if (entry.is_regular_file() && entry.path().extension() == ".txt")
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        }
        else
            paths.push_back(path);
    }
    return paths;
}

Algorithm algorithmOrThrow(std::string const &name)
{
    if (auto algo = parseAlgorithm(name))
        return *algo;
    throw CLI::ValidationError("--algo", "expected ils, bp or oracle");
}

int runSolve(std::string const &instancePath,
             RunConfig config,
             std::string const &algoName,
             std::string const &out,
             std::string const &warmStart,
             bool header)
{
    config.algo = algorithmOrThrow(algoName);
    Instance const inst = readInstance(instancePath);
    if (!warmStart.empty())
        config.warmStart = readSolution(warmStart, inst);

    RunRecord const record = solveInstance(inst, fs::path(instancePath).stem().string(), config);
    if (header)
        std::cout << csvHeader() << '\n';
    std::cout << csvRow(record) << '\n';

    if (!out.empty() && record.solution)
        writeFile(out, writeSolution(*record.solution, inst));

    return record.solution ? 0 : 1;
}

int runBenchCommand(std::vector<std::string> const &inputs,
                    RunConfig const &base,
                    std::string const &algoName,
                    int runs,
                    std::string const &bksPath,
                    std::string const &csvPath,
                    std::string const &markdownPath)
{
    RunConfig config = base;
    config.algo = algorithmOrThrow(algoName);

    std::vector<BenchInstance> instances;
    for (auto const &path : expandInputs(inputs))
        instances.push_back({path.stem().string(), readInstance(path)});

    std::vector<std::uint64_t> seeds(static_cast<size_t>(runs));
    std::iota(seeds.begin(), seeds.end(), base.seed);

    auto const records = runBench(instances, config, seeds, threadsFromEnvironment());
    auto const bks = bksPath.empty() ? std::map<std::string, double>{} : readBks(bksPath);

    std::ostringstream csv;
    csv << csvHeader() << '\n';
    for (auto const &record : records)
        csv << csvRow(record) << '\n';

    std::string const table = markdownTable(summarize(records, bks));

    std::cout << csv.str() << '\n' << table;
    if (!csvPath.empty())
        writeFile(csvPath, csv.str());
    if (!markdownPath.empty())
        writeFile(markdownPath, table);
    return 0;
}

int runGenerate(GeneratorParams params, std::string const &preset, int count, std::string const &outDir)
{
    fs::create_directories(outDir);
    std::uint64_t const firstSeed = params.seed;

    for (int k = 0; k != count; ++k)
    {
        GeneratorParams local = params;
        local.seed = firstSeed + static_cast<std::uint64_t>(k);
        if (preset == "small" || preset == "large")
        {
            // Pair counts cycle through the set shapes; one vehicle per pair
            // always admits a feasible solution.
            std::vector<int> const sizes = preset == "small" ? std::vector{10, 15, 20, 25}
                                                             : std::vector{75, 100, 125};
            local.numPairs = sizes[static_cast<size_t>(k) % sizes.size()];
            local.numVehicles = local.numPairs;
            local.maxLength = preset == "small" ? 300 : 1000;
            local.pickupLocations = local.numPairs;
            local.deliveryLocations = local.numPairs;
        }

        Instance const inst = generateInstance(local);
        std::string const name = (preset.empty() ? "gen" : preset) + "_n" + std::to_string(local.numPairs)
                                 + "_s" + std::to_string(local.seed) + ".txt";
        writeFile(fs::path(outDir) / name, writeInstance(inst));
        std::cout << (fs::path(outDir) / name).string() << '\n';
    }
    return 0;
}

int runCheck(std::string const &instancePath, std::string const &solutionPath)
{
    Instance const inst = readInstance(instancePath);
    Solution const sol = readSolution(solutionPath, inst);
    auto const eval = evaluateSolution(sol, inst);

    std::cout << (eval.feasible ? "feasible" : "infeasible") << " cost=" << formatDouble(eval.cost)
              << " routes=" << sol.routes.size() << " visits=" << customerVisits(sol)
              << " splits=" << splitPairs(sol, inst) << '\n';
    if (eval.tooManyRoutes)
        std::cout << "too many routes\n";
    for (size_t r = 0; r != sol.routes.size(); ++r)
        if (!sol.routes[r].feasible())
            std::cout << "route " << r + 1 << ": " << toString(sol.routes[r].violation()) << '\n';
    for (auto const &[pair, shortfall] : eval.uncovered)
        std::cout << "pair " << pair << " uncovered by " << shortfall << '\n';

    return eval.feasible ? 0 : 1;
}
}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Split-load pickup and delivery solvers"};
    app.require_subcommand(1);

    RunConfig config;
    std::string algo = "ils";

    auto addRunOptions = [&](CLI::App *cmd) {
        cmd->add_option("--algo", algo, "ils, bp or oracle")->capture_default_str();
        cmd->add_option("--time-limit", config.timeLimit, "wall-clock seconds per run")->capture_default_str();
        cmd->add_option("--seed", config.seed, "random seed (first seed for bench)")->capture_default_str();
        cmd->add_option("--iterations", config.maxIterations, "ILS iteration cap (negative: none)");
        cmd->add_option("--scale", config.scale, "pricing distance buckets use floor(d * 10^scale)")
            ->capture_default_str();
        cmd->add_flag("--no-rcsp{false}", config.useRcsp, "ILS without the RCSP insertion neighborhood");
    };

    std::string instance;
    std::string out;
    std::string warmStart;
    bool header = false;
    bool verbose = false;
    auto *solve = app.add_subcommand("solve", "solve one instance and print a CSV record");
    solve->add_option("instance", instance, "instance file")->required()->check(CLI::ExistingFile);
    addRunOptions(solve);
    solve->add_option("--out", out, "write the solution file here");
    solve->add_option("--warm-start", warmStart, "initial solution for bp")->check(CLI::ExistingFile);
    solve->add_flag("--header", header, "print the CSV header first");
    solve->add_flag("--verbose", verbose, "branch-and-price progress on stderr");

    std::vector<std::string> inputs;
    int runs = 1;
    std::string bks;
    std::string csvPath;
    std::string markdownPath;
    auto *bench = app.add_subcommand("bench", "run seeds over instances and tabulate");
    bench->add_option("instances", inputs, "instance files or directories")->required();
    addRunOptions(bench);
    bench->add_option("--runs", runs, "runs (seeds) per instance")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--bks", bks, "best-known-solution CSV (instance,cost)")->check(CLI::ExistingFile);
    bench->add_option("--out", csvPath, "write the CSV here");
    bench->add_option("--markdown", markdownPath, "write the Markdown table here");

    GeneratorParams gen;
    std::string preset;
    int count = 1;
    std::string outDir = ".";
    auto *generate = app.add_subcommand("generate", "write random instances");
    generate->add_option("--preset", preset, "small (10-25 pairs, L=300) or large (75-125 pairs, L=1000)")
        ->check(CLI::IsMember({"small", "large"}));
    generate->add_option("--count", count)->capture_default_str()->check(CLI::PositiveNumber);
    generate->add_option("--out", outDir, "output directory")->capture_default_str();
    generate->add_option("--seed", gen.seed)->capture_default_str();
    generate->add_option("--pairs", gen.numPairs)->capture_default_str();
    generate->add_option("--vehicles", gen.numVehicles)->capture_default_str();
    generate->add_option("--capacity", gen.capacity)->capture_default_str();
    generate->add_option("--max-length", gen.maxLength, "negative: unlimited")->capture_default_str();
    generate->add_option("--pickup-sites", gen.pickupLocations)->capture_default_str();
    generate->add_option("--delivery-sites", gen.deliveryLocations)->capture_default_str();
    generate->add_option("--demand-lo", gen.demandLo, "percent of capacity")->capture_default_str();
    generate->add_option("--demand-hi", gen.demandHi, "percent of capacity")->capture_default_str();

    std::string solution;
    auto *check = app.add_subcommand("check", "validate a solution file");
    check->add_option("instance", instance)->required()->check(CLI::ExistingFile);
    check->add_option("solution", solution)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (verbose)
            config.log = &std::cerr;
        if (gen.maxLength < 0)
            gen.maxLength = INF_DISTANCE;

        if (solve->parsed())
            return runSolve(instance, config, algo, out, warmStart, header);
        if (bench->parsed())
            return runBenchCommand(inputs, config, algo, runs, bks, csvPath, markdownPath);
        if (generate->parsed())
            return runGenerate(gen, preset, count, outDir);
        if (check->parsed())
            return runCheck(instance, solution);
    }
    catch (CLI::Error const &e)
    {
        return app.exit(e);
    }
    catch (OracleSizeError const &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    catch (std::exception const &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    return 0;
}
