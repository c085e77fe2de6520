#include "helpers.h"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace splitpd;

namespace
{
char const *const TWO_PAIRS = R"(# two pairs
MPDPSL 2 1 10 -1
NODES
0 0 0
1 3 0
2 0 4
3 6 0
4 0 8
DEMANDS
1 4
2 5
EOF
)";
}  // namespace

TEST_SUITE("instance_io")
{
    TEST_CASE("coordinate file parses to a symmetric instance")
    {
        Instance const inst = parseInstance(TWO_PAIRS);
        CHECK(inst.numPairs() == 2);
        CHECK(inst.numVehicles() == 1);
        CHECK(inst.capacity() == 10);
        CHECK_FALSE(inst.hasDistanceLimit());
        CHECK(inst.demand(1) == 4);
        CHECK(inst.demand(2) == 5);
        for (int i = 0; i <= inst.endDepot(); ++i)
            for (int j = 0; j <= inst.endDepot(); ++j)
                CHECK(inst.dist(i, j) == inst.dist(j, i));
        CHECK(inst.dist(1, 2) == doctest::Approx(5));
        CHECK(inst.dist(0, inst.endDepot()) == 0);
        CHECK(inst.dist(3, inst.endDepot()) == inst.dist(3, 0));
        CHECK(inst.isMetric());
        CHECK(inst.dtiHolds());
    }

    TEST_CASE("demand above capacity is rejected")
    {
        std::string text = TWO_PAIRS;
        text.replace(text.find("2 5\nEOF"), 3, "2 11");
        CHECK_THROWS_AS(parseInstance(text), ValidationError);
    }

    TEST_CASE("syntax errors carry the line number")
    {
        std::string text = TWO_PAIRS;
        text.replace(text.find("1 3 0"), 5, "1 3 x");
        try
        {
            parseInstance(text);
            FAIL("expected a parse error");
        }
        catch (ParseError const &e)
        {
            CHECK(e.line() == 5);
        }
        CHECK_THROWS_AS(parseInstance("MPDPSL 2 1 10\n"), ParseError);
        std::string noEof = TWO_PAIRS;
        noEof.erase(noEof.find("EOF"));
        CHECK_THROWS_AS(parseInstance(noEof), ParseError);
        CHECK_THROWS_AS(parseInstance(TWO_PAIRS, InstanceFormat::Matrix), ParseError);
    }

    TEST_CASE("matrix with a delivery shortcut violates the delivery triangle inequality")
    {
        // Going 1 -> 3 (a delivery) -> 2 is shorter than 1 -> 2 directly.
        char const *const text = R"(MPDPSL 2 1 10 -1
MATRIX
0 5 5 5 5
5 0 9 2 5
5 9 0 2 5
5 2 2 0 5
5 5 5 5 0
DEMANDS
1 3
2 3
EOF
)";
        Instance const inst = parseInstance(text);
        CHECK_FALSE(inst.dtiHolds());
        CHECK_FALSE(inst.isMetric());

        // Independent check over every (i, j, delivery k).
        bool violated = false;
        for (int i = 0; i <= inst.endDepot(); ++i)
            for (int j = 0; j <= inst.endDepot(); ++j)
                for (int k = inst.numPairs() + 1; k <= 2 * inst.numPairs(); ++k)
                    violated |= inst.dist(i, j) > inst.dist(i, k) + inst.dist(k, j) + 1e-9;
        CHECK(violated);
        CHECK_THROWS_AS(parseInstance(text, InstanceFormat::Coordinates), ParseError);
    }

    TEST_CASE("instances round-trip through text")
    {
        for (std::uint64_t seed = 0; seed != 10; ++seed)
        {
            Instance const inst = testing::smallInstance(3 + static_cast<int>(seed % 3), 2, seed);
            Instance const back = parseInstance(writeInstance(inst));
            CHECK(back.locationMatrix() == inst.locationMatrix());
            CHECK(back.pickupDemands() == inst.pickupDemands());
            CHECK(back.maxLength() == inst.maxLength());
            CHECK(back.numVehicles() == inst.numVehicles());
            CHECK(back.capacity() == inst.capacity());
            CHECK(writeInstance(back) == writeInstance(inst));
        }

        Instance const matrixOnly(1, 1, 5, 20, {3}, {0, 2, 3, 2, 0, 1.5, 3, 1.5, 0});
        Instance const back = parseInstance(writeInstance(matrixOnly));
        CHECK(back.locationMatrix() == matrixOnly.locationMatrix());
    }

    TEST_CASE("solutions round-trip through text")
    {
        Instance const inst = testing::fig2Instance();
        std::vector<Visit> visits = {{1, 99}};
        for (int k = 0; k != 100; ++k)
        {
            visits.push_back({2, 1});
            visits.push_back({4, 0});
        }
        visits.push_back({3, 0});
        Solution sol;
        sol.routes.emplace_back(visits, inst);

        Solution const back = parseSolution(writeSolution(sol, inst), inst);
        CHECK(back == sol);

        Solution bad;
        bad.routes.emplace_back(std::vector<Visit>{{1, 99}, {3, 0}}, inst);
        CHECK_THROWS_AS(writeSolution(bad, inst), std::invalid_argument);
    }

    TEST_CASE("formatDouble is exact")
    {
        for (double v : {0.0, 1.0, 0.1, 34.34, 1.0 / 3.0, 1e-12, 123456.789, std::sqrt(2.0)})
            CHECK(std::stod(formatDouble(v)) == v);
        CHECK(formatDouble(2.5) == "2.5");
    }

    TEST_CASE("generator is deterministic per seed")
    {
        GeneratorParams params;
        params.seed = 42;
        CHECK(writeInstance(generateInstance(params)) == writeInstance(generateInstance(params)));
        params.seed = 43;
        GeneratorParams other = params;
        other.seed = 44;
        CHECK(writeInstance(generateInstance(params)) != writeInstance(generateInstance(other)));
    }

    TEST_CASE("generated demands stay within the percentage range")
    {
        GeneratorParams params;
        params.numPairs = 40;
        params.capacity = 100;
        params.demandLo = 51;
        params.demandHi = 60;
        params.maxLength = INF_DISTANCE;
        for (std::uint64_t seed = 0; seed != 5; ++seed)
        {
            params.seed = seed;
            Instance const inst = generateInstance(params);
            for (int p = 1; p <= inst.numPairs(); ++p)
            {
                CHECK(inst.demand(p) >= 51);
                CHECK(inst.demand(p) <= 60);
            }
            CHECK(inst.dtiHolds());
        }
    }

    TEST_CASE("shared pickup sites limit the distinct pickup coordinates")
    {
        GeneratorParams params;
        params.numPairs = 75;
        params.numVehicles = 20;
        params.maxLength = 1000;
        params.pickupLocations = 5;
        params.deliveryLocations = 75;
        params.seed = 3;
        Instance const inst = generateInstance(params);
        REQUIRE(inst.locations().has_value());
        std::set<std::pair<double, double>> sites;
        for (int p = 1; p <= inst.numPairs(); ++p)
        {
            auto const &pt = (*inst.locations())[static_cast<size_t>(p)];
            sites.insert({pt.x, pt.y});
        }
        CHECK(sites.size() <= 5);
    }

    TEST_CASE("generated pairs fit the distance limit")
    {
        GeneratorParams params;
        params.numPairs = 25;
        params.maxLength = 300;
        params.numVehicles = 25;
        for (std::uint64_t seed = 0; seed != 5; ++seed)
        {
            params.seed = seed;
            Instance const inst = generateInstance(params);
            for (int p = 1; p <= inst.numPairs(); ++p)
            {
                CHECK(inst.demand(p) <= inst.capacity());
                Distance const tour = inst.dist(0, p) + inst.dist(p, inst.deliveryOf(p))
                                      + inst.dist(inst.deliveryOf(p), inst.endDepot());
                CHECK(tour <= inst.maxLength());
            }
        }
    }
}
