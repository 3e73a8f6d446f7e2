#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "gkt/error.hpp"
#include "gkt/grid.hpp"
#include "oracles.hpp"

using namespace gkt;

TEST_CASE("cell centers") {
    BevGridSpec unit{1, 1, -1, 1, -1, 1, 0};
    Vec3 c = cell_center(unit, 0, 0);
    CHECK(c.x == doctest::Approx(0));
    CHECK(c.y == doctest::Approx(0));
    CHECK(c.z == doctest::Approx(0));

    BevGridSpec two{2, 2, 0, 2, 0, 2, 1};
    Vec3 first = cell_center(two, 0, 0);
    CHECK(first.x == doctest::Approx(0.5));
    CHECK(first.y == doctest::Approx(0.5));
    CHECK(first.z == doctest::Approx(1.0));

    // 25x25 over a 100 m square: 4 m cells
    BevGridSpec standard{25, 25, -50, 50, -50, 50, 0};
    double cell_width = cell_center(standard, 0, 1).x - cell_center(standard, 0, 0).x;
    CHECK(cell_width == doctest::Approx(4.0));
    CHECK(cell_center(standard, 0, 0).x == doctest::Approx(-48.0));

    CHECK_THROWS_AS(cell_center(standard, 25, 0), Error);
    CHECK_THROWS_AS(cell_center(standard, 0, -1), Error);
}

TEST_CASE("cell centers are strictly monotone in row and col") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        BevGridSpec grid = oracle::random_grid(rng);
        for (int r = 0; r + 1 < grid.rows; ++r) {
            CHECK(cell_center(grid, r + 1, 0).y > cell_center(grid, r, 0).y);
        }
        for (int c = 0; c + 1 < grid.cols; ++c) {
            CHECK(cell_center(grid, 0, c + 1).x > cell_center(grid, 0, c).x);
        }
    }
}

TEST_CASE("full 3x3 offsets are row-major") {
    std::vector<KernelOffset> offsets = kernel_offsets({3, 3, KernelLayout::Full, 1});
    REQUIRE(offsets.size() == 9);
    std::vector<KernelOffset> expected = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 0},
                                          {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    CHECK(offsets == expected);
}

TEST_CASE("cross 3/3 lists the center once, vertical first") {
    std::vector<KernelOffset> offsets = kernel_offsets({3, 3, KernelLayout::Cross, 1});
    std::vector<KernelOffset> expected = {{-1, 0}, {0, 0}, {1, 0}, {0, -1}, {0, 1}};
    CHECK(offsets == expected);
}

TEST_CASE("dilated 3x3 steps by the dilation") {
    std::vector<KernelOffset> offsets = kernel_offsets({3, 3, KernelLayout::Dilated, 2});
    REQUIRE(offsets.size() == 9);
    for (const KernelOffset& off : offsets) {
        CHECK((off.d_row == -2 || off.d_row == 0 || off.d_row == 2));
        CHECK((off.d_col == -2 || off.d_col == 0 || off.d_col == 2));
    }
    CHECK(offsets.front() == KernelOffset{-2, -2});
    CHECK(offsets.back() == KernelOffset{2, 2});
}

TEST_CASE("offset count and negation closure hold for every layout") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        KernelSpec spec = oracle::random_kernel(rng);
        std::vector<KernelOffset> offsets = kernel_offsets(spec);
        CHECK(static_cast<int>(offsets.size()) == spec.num_positions());
        if (spec.layout == KernelLayout::Cross) {
            CHECK(offsets.size() == static_cast<size_t>(spec.k_h + spec.k_w - 1));
        } else {
            CHECK(offsets.size() == static_cast<size_t>(spec.k_h * spec.k_w));
        }
        std::set<std::pair<int, int>> set;
        for (const KernelOffset& off : offsets) set.insert({off.d_row, off.d_col});
        CHECK(set.size() == offsets.size()); // no duplicates
        for (const KernelOffset& off : offsets) {
            CHECK(set.count({-off.d_row, -off.d_col}) == 1);
        }
    }
}

TEST_CASE("kernel validation rejects even extents and bad dilation") {
    CHECK_THROWS_AS((KernelSpec{2, 3, KernelLayout::Full, 1}.validate()), Error);
    CHECK_THROWS_AS((KernelSpec{3, 0, KernelLayout::Full, 1}.validate()), Error);
    CHECK_THROWS_AS((KernelSpec{3, 3, KernelLayout::Dilated, 0}.validate()), Error);
    CHECK_NOTHROW((KernelSpec{7, 3, KernelLayout::Full, 1}.validate()));
    CHECK_NOTHROW((KernelSpec{1, 7, KernelLayout::Full, 1}.validate()));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((BevGridSpec{0, 5, -1, 1, -1, 1, 0}.validate()), Error);
    CHECK_THROWS_AS((BevGridSpec{5, 5, 1, -1, -1, 1, 0}.validate()), Error);
    CHECK_NOTHROW((BevGridSpec{5, 5, -1, 1, -1, 1, 0}.validate()));
}

TEST_CASE("kernel spec parsing") {
    KernelSpec a = parse_kernel_spec("7x3");
    CHECK(a.k_h == 7);
    CHECK(a.k_w == 3);
    CHECK(a.layout == KernelLayout::Full);
    KernelSpec b = parse_kernel_spec("3x3:cross");
    CHECK(b.layout == KernelLayout::Cross);
    KernelSpec c = parse_kernel_spec("3x3:dilated:2");
    CHECK(c.layout == KernelLayout::Dilated);
    CHECK(c.dilation == 2);
    CHECK(format_kernel_spec(c) == "3x3:dilated:2");
    CHECK(format_kernel_spec(a) == "7x3");
    CHECK_THROWS_AS(parse_kernel_spec("3"), Error);
    CHECK_THROWS_AS(parse_kernel_spec("3x3:banana"), Error);
    CHECK_THROWS_AS(parse_kernel_spec("4x4"), Error);
}
