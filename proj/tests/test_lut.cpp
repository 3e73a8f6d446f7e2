#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "gkt/error.hpp"
#include "gkt/lut.hpp"
#include "oracles.hpp"

using namespace gkt;

namespace {

CameraRig single_view_rig() {
    CameraRig rig;
    CameraView view;
    view.name = "only";
    view.intrinsics = {1.0, 1.0, 0.0, 0.0, 0.0};
    view.image_height = 4;
    view.image_width = 4;
    rig.views.push_back(view);
    rig.scale_strides = {1};
    return rig;
}

} // namespace

TEST_CASE("single entry on the optical axis") {
    CameraRig rig = single_view_rig();
    // cell center (0,0,5) sits on the optical axis, in front of the camera
    BevGridSpec grid{1, 1, -1, 1, -1, 1, 5.0};
    KernelSpec kernel{1, 1, KernelLayout::Full, 1};
    Lut lut = build_lut(rig, grid, kernel);
    REQUIRE(lut.num_entries() == 1);
    CHECK(lut.valid[0] == 1);
    CHECK(lut.indices[0] == 0); // principal point pixel (0,0) flattens to 0
}

TEST_CASE("cells behind the camera produce all-invalid blocks") {
    CameraRig rig = single_view_rig();
    BevGridSpec grid{2, 2, -1, 1, -1, 1, -5.0};
    Lut lut = build_lut(rig, grid, KernelSpec{3, 3, KernelLayout::Full, 1});
    for (uint8_t v : lut.valid) CHECK(v == 0);
    for (uint32_t idx : lut.indices) CHECK(idx == 0); // canonical invalid encoding
}

TEST_CASE("build_lut matches per-query recomputation on random instances") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        CameraRig rig = oracle::random_rig(rng);
        BevGridSpec grid = oracle::random_grid(rng, 8);
        KernelSpec kernel = oracle::random_kernel(rng);
        Lut lut = build_lut(rig, grid, kernel);
        for (int q = 0; q < grid.num_queries(); ++q) {
            std::vector<oracle::LutEntry> expect =
                oracle::lut_entries_for_query(rig, grid, kernel, q);
            LutSlice slice = lookup(lut, q);
            REQUIRE(slice.indices.size() == expect.size());
            for (size_t i = 0; i < expect.size(); ++i) {
                CHECK(slice.valid[i] == (expect[i].valid ? 1 : 0));
                CHECK(slice.indices[i] == expect[i].index);
            }
        }
    }
}

TEST_CASE("builds are deterministic and thread-count independent") {
    std::mt19937_64 rng(42);
    CameraRig rig = oracle::random_rig(rng);
    BevGridSpec grid = oracle::random_grid(rng, 12);
    KernelSpec kernel{3, 3, KernelLayout::Full, 1};
    Lut once = build_lut(rig, grid, kernel, std::nullopt, 1);
    Lut again = build_lut(rig, grid, kernel, std::nullopt, 1);
    Lut threaded = build_lut(rig, grid, kernel, std::nullopt, 4);
    CHECK(serialize_lut_bytes(once) == serialize_lut_bytes(again));
    CHECK(serialize_lut_bytes(once) == serialize_lut_bytes(threaded));
}

TEST_CASE("no valid entry escapes its plane, even with extreme extrinsics") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        CameraRig rig;
        for (int v = 0; v < 2; ++v) {
            CameraView view = oracle::random_view(rng);
            view.extrinsics = oracle::random_extrinsics(rng, 500.0); // far-flung cameras
            rig.views.push_back(view);
        }
        rig.scale_strides = {1 + static_cast<int>(rng() % 3)};
        BevGridSpec grid = oracle::random_grid(rng, 6);
        Lut lut = build_lut(rig, grid, oracle::random_kernel(rng));
        size_t num_planes = static_cast<size_t>(lut.num_views) * lut.num_scales;
        for (size_t i = 0; i < lut.num_entries(); ++i) {
            if (!lut.valid[i]) continue;
            size_t plane = (i / lut.positions_per_kernel) % num_planes;
            CHECK(lut.indices[i] <
                  lut.plane_heights[plane] * static_cast<uint64_t>(lut.plane_widths[plane]));
        }
    }
}

TEST_CASE("lookup slices cover the entries in build order") {
    std::mt19937_64 rng(44);
    CameraRig rig = oracle::random_rig(rng);
    BevGridSpec grid = oracle::random_grid(rng, 6);
    KernelSpec kernel = oracle::random_kernel(rng);
    Lut lut = build_lut(rig, grid, kernel);

    LutSlice first = lookup(lut, 0);
    CHECK(first.indices.size() ==
          static_cast<size_t>(lut.num_views) * lut.num_scales * lut.positions_per_kernel);

    size_t offset = 0;
    for (int q = 0; q < grid.num_queries(); ++q) {
        LutSlice slice = lookup(lut, q);
        CHECK(slice.indices.data() == lut.indices.data() + offset);
        offset += slice.indices.size();
    }
    CHECK(offset == lut.num_entries());

    CHECK_THROWS_AS(lookup(lut, -1), Error);
    CHECK_THROWS_AS(lookup(lut, grid.num_queries()), Error);
}

TEST_CASE("serialization round-trips bit-exactly") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        Lut lut = build_lut(oracle::random_rig(rng), oracle::random_grid(rng, 6),
                            oracle::random_kernel(rng));
        std::vector<uint8_t> bytes = serialize_lut_bytes(lut);
        Lut back = deserialize_lut_bytes(bytes);
        CHECK(back == lut);
        CHECK(serialize_lut_bytes(back) == bytes);
    }
}

TEST_CASE("malformed streams raise distinct error kinds") {
    std::mt19937_64 rng(46);
    Lut lut = build_lut(oracle::random_rig(rng), oracle::random_grid(rng, 4),
                        KernelSpec{3, 3, KernelLayout::Full, 1});
    std::vector<uint8_t> bytes = serialize_lut_bytes(lut);

    SUBCASE("bad magic") {
        std::vector<uint8_t> bad = bytes;
        bad[0] = 'X';
        try {
            deserialize_lut_bytes(bad);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::BadMagic);
        }
    }
    SUBCASE("bad version") {
        std::vector<uint8_t> bad = bytes;
        bad[4] = 0xFF;
        try {
            deserialize_lut_bytes(bad);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::BadVersion);
        }
    }
    SUBCASE("truncation") {
        for (size_t cut : {size_t{2}, size_t{5}, size_t{20}, bytes.size() - 1}) {
            std::vector<uint8_t> bad(bytes.begin(), bytes.begin() + static_cast<long>(cut));
            try {
                deserialize_lut_bytes(bad);
                FAIL("expected error at cut ", cut);
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::Truncated);
            }
        }
    }
    SUBCASE("valid entry pointing past its plane") {
        // find a valid entry and corrupt its index to plane size
        size_t num_planes = static_cast<size_t>(lut.num_views) * lut.num_scales;
        size_t target = lut.num_entries();
        for (size_t i = 0; i < lut.num_entries(); ++i) {
            if (lut.valid[i]) {
                target = i;
                break;
            }
        }
        if (target < lut.num_entries()) {
            Lut corrupt = lut;
            size_t plane = (target / lut.positions_per_kernel) % num_planes;
            corrupt.indices[target] =
                corrupt.plane_heights[plane] * corrupt.plane_widths[plane];
            try {
                deserialize_lut_bytes(serialize_lut_bytes(corrupt));
                FAIL("expected error");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::Inconsistent);
            }
        }
    }
}

TEST_CASE("height override changes the effective plane and the fingerprint") {
    std::mt19937_64 rng(47);
    CameraRig rig = oracle::random_rig(rng);
    BevGridSpec grid = oracle::random_grid(rng, 8);
    KernelSpec kernel{3, 3, KernelLayout::Full, 1};

    Lut base = build_lut(rig, grid, kernel);
    Lut overridden = build_lut(rig, grid, kernel, grid.height_z + 1.5);

    BevGridSpec shifted = grid;
    shifted.height_z = grid.height_z + 1.5;
    Lut direct = build_lut(rig, shifted, kernel);

    CHECK(overridden == direct);
    CHECK(overridden.fingerprint != base.fingerprint);
    CHECK(build_lut(rig, grid, kernel, grid.height_z).fingerprint == base.fingerprint);
}

TEST_CASE("invalid inputs are rejected before any computation") {
    CameraRig rig = single_view_rig();
    BevGridSpec grid{1, 1, -1, 1, -1, 1, 5.0};
    CHECK_THROWS_AS(build_lut(rig, BevGridSpec{0, 1, -1, 1, -1, 1, 0},
                              KernelSpec{3, 3, KernelLayout::Full, 1}),
                    Error);
    CHECK_THROWS_AS(build_lut(rig, grid, KernelSpec{2, 2, KernelLayout::Full, 1}), Error);
    CHECK_THROWS_AS(build_lut(CameraRig{}, grid, KernelSpec{3, 3, KernelLayout::Full, 1}),
                    Error);
}
