#include "splitpd/instance_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

using splitpd::Distance;
using splitpd::Instance;
using splitpd::InstanceFormat;
using splitpd::Load;
using splitpd::ParseError;
using splitpd::Point;
using splitpd::Route;
using splitpd::Solution;
using splitpd::Visit;

ParseError::ParseError(std::string const &what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line)
{
}

namespace
{
struct Line
{
    int number;
    std::vector<std::string_view> tokens;
};

// Splits into non-empty lines of whitespace-separated tokens, dropping
// comments.
std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> lines;
    int number = 0;
    while (!text.empty())
    {
        auto const end = text.find('\n');
        auto line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{}
                                             : text.substr(end + 1);
        ++number;

        if (auto const hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        Line parsed{number, {}};
        size_t pos = 0;
        while (pos < line.size())
        {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
            auto const start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
            if (pos > start)
                parsed.tokens.push_back(line.substr(start, pos - start));
        }

        if (!parsed.tokens.empty())
            lines.push_back(std::move(parsed));
    }
    return lines;
}

template <typename T> T parseNumber(std::string_view token, int line)
{
    T value{};
    auto const *first = token.data();
    auto const *last = token.data() + token.size();
    auto const [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("invalid number '" + std::string(token) + "'", line);
    return value;
}

void expectTokens(Line const &line, size_t count)
{
    if (line.tokens.size() != count)
        throw ParseError("expected " + std::to_string(count) + " fields, got "
                             + std::to_string(line.tokens.size()),
                         line.number);
}

std::string readText(std::filesystem::path const &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}
}  // namespace

std::string splitpd::formatDouble(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";

    char buffer[64];
    auto const [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

Instance splitpd::parseInstance(std::string_view text, InstanceFormat format)
{
    auto const lines = tokenize(text);
    if (lines.empty())
        throw ParseError("empty instance file", 0);

    auto const &header = lines[0];
    if (header.tokens[0] != "MPDPSL")
        throw ParseError("expected header 'MPDPSL n m Q L'", header.number);
    expectTokens(header, 5);

    auto const n = parseNumber<int>(header.tokens[1], header.number);
    auto const m = parseNumber<int>(header.tokens[2], header.number);
    auto const capacity = parseNumber<Load>(header.tokens[3], header.number);
    auto maxLength = parseNumber<double>(header.tokens[4], header.number);
    if (n < 0)
        throw ParseError("number of pairs must be non-negative", header.number);
    if (maxLength == -1)
        maxLength = INF_DISTANCE;

    auto const locs = static_cast<size_t>(2 * n + 1);
    std::vector<Point> points;
    std::vector<char> seenPoint;
    std::vector<Distance> matrix;
    std::vector<Load> demands(n, 0);
    std::vector<char> seenDemand(n, 0);

    enum class Section
    {
        None,
        Nodes,
        Matrix,
        Demands,
        Done
    };
    Section section = Section::None;
    bool haveNodes = false;
    bool haveMatrix = false;
    size_t matrixRows = 0;

    for (size_t idx = 1; idx != lines.size(); ++idx)
    {
        auto const &line = lines[idx];
        auto const &head = line.tokens[0];

        if (section == Section::Done)
            throw ParseError("content after EOF", line.number);

        if (head == "NODES" || head == "MATRIX" || head == "DEMANDS" || head == "EOF")
        {
            expectTokens(line, 1);
            if (head == "NODES")
            {
                if (format == InstanceFormat::Matrix)
                    throw ParseError("NODES section not allowed in matrix format",
                                     line.number);
                if (haveNodes || haveMatrix)
                    throw ParseError("duplicate distance section", line.number);
                haveNodes = true;
                points.assign(locs, Point{});
                seenPoint.assign(locs, 0);
                section = Section::Nodes;
            }
            else if (head == "MATRIX")
            {
                if (format == InstanceFormat::Coordinates)
                    throw ParseError("MATRIX section not allowed in coordinate format",
                                     line.number);
                if (haveNodes || haveMatrix)
                    throw ParseError("duplicate distance section", line.number);
                haveMatrix = true;
                matrix.reserve(locs * locs);
                section = Section::Matrix;
            }
            else if (head == "DEMANDS")
                section = Section::Demands;
            else
                section = Section::Done;
            continue;
        }

        switch (section)
        {
            case Section::Nodes:
            {
                expectTokens(line, 3);
                auto const id = parseNumber<int>(line.tokens[0], line.number);
                if (id < 0 || static_cast<size_t>(id) >= locs)
                    throw ParseError("node id out of range", line.number);
                if (seenPoint[id])
                    throw ParseError("duplicate node id", line.number);
                seenPoint[id] = 1;
                points[id] = {parseNumber<double>(line.tokens[1], line.number),
                              parseNumber<double>(line.tokens[2], line.number)};
                break;
            }
            case Section::Matrix:
            {
                expectTokens(line, locs);
                if (matrixRows == locs)
                    throw ParseError("too many matrix rows", line.number);
                for (auto const token : line.tokens)
                {
                    auto const d = parseNumber<double>(token, line.number);
                    if (d < 0)
                        throw ValidationError("line " + std::to_string(line.number)
                                              + ": negative distance");
                    matrix.push_back(d);
                }
                ++matrixRows;
                break;
            }
            case Section::Demands:
            {
                expectTokens(line, 2);
                auto const pair = parseNumber<int>(line.tokens[0], line.number);
                if (pair < 1 || pair > n)
                    throw ParseError("pair index out of range", line.number);
                if (seenDemand[pair - 1])
                    throw ParseError("duplicate demand entry", line.number);
                seenDemand[pair - 1] = 1;
                demands[pair - 1] = parseNumber<Load>(line.tokens[1], line.number);
                break;
            }
            default:
                throw ParseError("unexpected line '" + std::string(head) + "'",
                                 line.number);
        }
    }

    auto const lastLine = lines.back().number;
    if (section != Section::Done)
        throw ParseError("missing EOF", lastLine);
    if (!haveNodes && !haveMatrix)
        throw ParseError("missing NODES or MATRIX section", lastLine);
    if (haveNodes && std::count(seenPoint.begin(), seenPoint.end(), 1)
                         != static_cast<long>(locs))
        throw ParseError("NODES section must list ids 0.." + std::to_string(2 * n),
                         lastLine);
    if (haveMatrix && matrixRows != locs)
        throw ParseError("MATRIX section must have " + std::to_string(locs) + " rows",
                         lastLine);
    if (std::count(seenDemand.begin(), seenDemand.end(), 1) != n)
        throw ParseError("DEMANDS section must list pairs 1.." + std::to_string(n),
                         lastLine);

    if (haveNodes)
        return Instance::fromCoordinates(n, m, capacity, maxLength, demands, points);
    return Instance(n, m, capacity, maxLength, demands, matrix);
}

Instance splitpd::readInstance(std::filesystem::path const &path)
{
    return parseInstance(readText(path));
}

std::string splitpd::writeInstance(Instance const &inst)
{
    std::ostringstream out;
    auto const n = inst.numPairs();
    out << "MPDPSL " << n << ' ' << inst.numVehicles() << ' ' << inst.capacity()
        << ' ' << (inst.hasDistanceLimit() ? formatDouble(inst.maxLength()) : "-1")
        << '\n';

    if (auto const &locations = inst.locations())
    {
        out << "NODES\n";
        for (size_t id = 0; id != locations->size(); ++id)
            out << id << ' ' << formatDouble((*locations)[id].x) << ' '
                << formatDouble((*locations)[id].y) << '\n';
    }
    else
    {
        out << "MATRIX\n";
        auto const matrix = inst.locationMatrix();
        auto const locs = static_cast<size_t>(2 * n + 1);
        for (size_t i = 0; i != locs; ++i)
        {
            for (size_t j = 0; j != locs; ++j)
                out << (j ? " " : "") << formatDouble(matrix[i * locs + j]);
            out << '\n';
        }
    }

    out << "DEMANDS\n";
    for (int pair = 1; pair <= n; ++pair)
        out << pair << ' ' << inst.demand(pair) << '\n';
    out << "EOF\n";
    return out.str();
}

std::string splitpd::writeSolution(Solution const &sol, Instance const &inst)
{
    auto const eval = evaluateSolution(sol, inst);
    if (!eval.feasible)
        throw std::invalid_argument("refusing to write an infeasible solution");

    size_t numRoutes = 0;
    for (auto const &route : sol.routes)
        numRoutes += !route.empty();

    std::ostringstream out;
    out << "MPDPSL-SOLUTION " << inst.numPairs() << ' ' << numRoutes << '\n';
    for (auto const &route : sol.routes)
    {
        if (route.empty())
            continue;
        out << "ROUTE";
        for (auto const &visit : route.visits())
            out << ' ' << visit.vertex << '(' << visit.amount << ')';
        out << '\n';
    }
    out << "COST " << formatDouble(eval.cost) << '\n';
    return out.str();
}

Solution splitpd::parseSolution(std::string_view text, Instance const &inst)
{
    auto const lines = tokenize(text);
    if (lines.empty())
        throw ParseError("empty solution file", 0);

    auto const &header = lines[0];
    if (header.tokens[0] != "MPDPSL-SOLUTION")
        throw ParseError("expected header 'MPDPSL-SOLUTION n routes'", header.number);
    expectTokens(header, 3);
    if (parseNumber<int>(header.tokens[1], header.number) != inst.numPairs())
        throw ParseError("solution does not match instance size", header.number);
    auto const expectedRoutes = parseNumber<size_t>(header.tokens[2], header.number);

    Solution sol;
    bool haveCost = false;
    for (size_t idx = 1; idx != lines.size(); ++idx)
    {
        auto const &line = lines[idx];
        if (haveCost)
            throw ParseError("content after COST", line.number);

        if (line.tokens[0] == "ROUTE")
        {
            std::vector<Visit> visits;
            for (size_t t = 1; t != line.tokens.size(); ++t)
            {
                auto const token = line.tokens[t];
                auto const open = token.find('(');
                if (open == std::string_view::npos || token.back() != ')')
                    throw ParseError("expected vertex(amount), got '"
                                         + std::string(token) + "'",
                                     line.number);
                auto const vertex = parseNumber<int>(token.substr(0, open), line.number);
                auto const amount = parseNumber<Load>(
                    token.substr(open + 1, token.size() - open - 2), line.number);
                if (!inst.isValidVertex(vertex) || inst.isDepot(vertex))
                    throw ParseError("invalid customer vertex " + std::to_string(vertex),
                                     line.number);
                if (inst.isPickup(vertex) && (amount < 1 || amount > inst.demand(vertex)))
                    throw ParseError("pickup amount out of range", line.number);
                visits.push_back({vertex, amount});
            }
            if (!visits.empty())
                sol.routes.emplace_back(std::move(visits), inst);
        }
        else if (line.tokens[0] == "COST")
        {
            expectTokens(line, 2);
            parseNumber<double>(line.tokens[1], line.number);
            haveCost = true;
        }
        else
            throw ParseError("unexpected line '" + std::string(line.tokens[0]) + "'",
                             line.number);
    }

    if (sol.routes.size() != expectedRoutes)
        throw ParseError("route count does not match header", header.number);
    return sol;
}

Solution splitpd::readSolution(std::filesystem::path const &path, Instance const &inst)
{
    return parseSolution(readText(path), inst);
}

void splitpd::writeFile(std::filesystem::path const &path, std::string const &contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

Instance splitpd::generateInstance(GeneratorParams const &params)
{
    auto const n = params.numPairs;
    if (n < 0)
        throw std::invalid_argument("number of pairs must be non-negative");
    if (params.demandLo <= 0 || params.demandLo > params.demandHi || params.demandHi > 100)
        throw std::invalid_argument("demand range must satisfy 0 < lo <= hi <= 100");
    if (n > 0 && (params.pickupLocations < 1 || params.deliveryLocations < 1))
        throw std::invalid_argument("site counts must be positive");

    auto const lo = std::max<Load>(1, (params.demandLo * params.capacity + 99) / 100);
    auto const hi = params.demandHi * params.capacity / 100;
    if (lo > hi)
        throw std::invalid_argument("demand range is empty for this capacity");

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    auto randomPoint = [&] { return Point{coord(rng), coord(rng)}; };

    auto const depot = randomPoint();
    std::vector<Point> pickupSites(params.pickupLocations);
    std::vector<Point> deliverySites(params.deliveryLocations);
    for (auto &site : pickupSites)
        site = randomPoint();
    for (auto &site : deliverySites)
        site = randomPoint();

    bool const freePickups = params.pickupLocations == n;
    bool const freeDeliveries = params.deliveryLocations == n;
    std::uniform_int_distribution<int> pickupSite(0, std::max(0, params.pickupLocations - 1));
    std::uniform_int_distribution<int> deliverySite(0, std::max(0, params.deliveryLocations - 1));

    auto dist = [](Point const &a, Point const &b) { return std::hypot(a.x - b.x, a.y - b.y); };
    bool const limited = params.maxLength < INF_DISTANCE;

    std::vector<Point> locations(2 * n + 1);
    locations[0] = depot;
    for (int pair = 1; pair <= n; ++pair)
    {
        Point pickup;
        Point delivery;
        for (int attempt = 0;; ++attempt)
        {
            if (attempt == 10000)
                throw std::invalid_argument("distance limit too tight for generated sites");

            pickup = freePickups ? randomPoint() : pickupSites[pickupSite(rng)];
            delivery = freeDeliveries ? randomPoint() : deliverySites[deliverySite(rng)];
            auto const tour = dist(depot, pickup) + dist(pickup, delivery)
                              + dist(delivery, depot);
            if (!limited || tour <= params.maxLength)
                break;
        }
        locations[pair] = pickup;
        locations[n + pair] = delivery;
    }

    std::uniform_int_distribution<Load> demand(lo, hi);
    std::vector<Load> demands(n);
    for (auto &q : demands)
        q = demand(rng);

    return Instance::fromCoordinates(n,
                                     params.numVehicles,
                                     params.capacity,
                                     params.maxLength,
                                     std::move(demands),
                                     locations);
}
