// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include <doctest.h>

#include <Eigen/Dense>
#include <cstring>
#include <random>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "seqscreen/dictionary.hpp"
#include "seqscreen/error.hpp"
#include "seqscreen/formats.hpp"
#include "seqscreen/lasso.hpp"

using namespace seqscreen;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& e : v) e = nd(rng);
    return v;
}

} // namespace

TEST_CASE("lambda_max on identity columns") {
    Dictionary D(2, 2, {1, 0, 0, 1});
    const std::vector<double> x{3, 4};
    const auto r = lambda_max(D, x);
    CHECK(r.lambda_max == 4.0);
    CHECK(r.argmax_index == 1);
    CHECK(r.sign == 1);
}

TEST_CASE("lambda_max with a negative correlation") {
    Dictionary D(2, 1, {1, 0});
    const std::vector<double> x{-2, 0};
    const auto r = lambda_max(D, x);
    CHECK(r.lambda_max == 2.0);
    CHECK(r.argmax_index == 0);
    CHECK(r.sign == -1);
}

TEST_CASE("lambda_max matches a naive double loop") {
    const std::size_t d = 20, p = 100;
    const auto m = gaussian(d * p, 7);
    const auto x = gaussian(d, 8);
    Dictionary D(d, p, m);
    const auto r = lambda_max(D, x);
    const auto [ref, arg] = oracle::lambda_max(m, d, p, x);
    CHECK(r.lambda_max == doctest::Approx(ref).epsilon(1e-13));
    CHECK(r.argmax_index == arg);
    for (std::size_t j = 0; j < p; ++j) {
        CHECK(r.lambda_max >= std::abs(oracle::dot(oracle::column(m, d, j), x)) - 1e-13);
    }
}

TEST_CASE("lambda_max ties go to the lowest index") {
    Dictionary D(2, 3, {0, 1, 1, 0, -1, 0});
    const std::vector<double> x{5, 0};
    const auto r = lambda_max(D, x);
    CHECK(r.argmax_index == 1);
    CHECK(r.sign == 1);
}

TEST_CASE("lambda_max rejects bad input") {
    Dictionary D(2, 2, {1, 0, 0, 1});
    CHECK_THROWS_AS(lambda_max(D, std::vector<double>{1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(lambda_max(D, std::vector<double>{0, 0}), InvalidArgument);
}

TEST_CASE("chunk partition examples") {
    const auto a = chunk_partition(10, 4);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == std::pair<std::size_t, std::size_t>{0, 4});
    CHECK(a[1] == std::pair<std::size_t, std::size_t>{4, 4});
    CHECK(a[2] == std::pair<std::size_t, std::size_t>{8, 2});
    const auto b = chunk_partition(4, 4);
    REQUIRE(b.size() == 1);
    CHECK(b[0].second == 4);
}

TEST_CASE("column chunks cover every index exactly once") {
    const std::size_t d = 3, p = 11;
    Dictionary D(d, p, gaussian(d * p, 1));
    for (std::size_t chunk : {std::size_t{1}, std::size_t{2}, std::size_t{3}, p - 1, p}) {
        std::vector<int> seen(p, 0);
        std::size_t expected_start = 0;
        D.for_each_chunk(chunk, [&](const ColumnBlock& b) {
            CHECK(b.start == expected_start);
            CHECK(b.width <= chunk);
            for (std::size_t j = 0; j < b.width; ++j) ++seen[b.start + j];
            expected_start += b.width;
        });
        for (int s : seen) CHECK(s == 1);
    }
    CHECK_THROWS_AS(D.chunks(0), InvalidArgument);
}

TEST_CASE("file-backed chunks reproduce the in-memory matrix bit-exactly") {
    testutil::TempDir tmp;
    const std::size_t d = 20, p = 100;
    const auto m = gaussian(d * p, 5);
    write_dmat(tmp / "D.dmat", d, p, m);
    const Dictionary F = Dictionary::open(tmp / "D.dmat");
    CHECK(F.file_backed());
    std::vector<double> concat;
    auto stream = F.chunks(7);
    ColumnBlock block;
    while (stream.next(block)) concat.insert(concat.end(), block.values.begin(), block.values.end());
    REQUIRE(concat.size() == m.size());
    CHECK(std::memcmp(concat.data(), m.data(), m.size() * sizeof(double)) == 0);
    CHECK(stream.buffer_bytes() == d * 7 * sizeof(double));
}

TEST_CASE("normalize_columns examples") {
    Dictionary D(2, 1, {3, 4});
    const auto N = D.normalize_columns();
    CHECK(N.normalized());
    CHECK(N.column(0)[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(N.column(0)[1] == doctest::Approx(0.8).epsilon(1e-15));

    Dictionary U(3, 1, {0, 1, 0});
    CHECK(std::abs(U.normalize_columns().column(0)[1] - 1.0) <= 1e-12);

    const std::size_t d = 15, p = 40;
    const auto R = Dictionary(d, p, gaussian(d * p, 3)).normalize_columns();
    for (std::size_t j = 0; j < p; ++j) {
        const auto c = R.column(j);
        CHECK(std::abs(oracle::norm(std::vector<double>(c.begin(), c.end())) - 1.0) <= 1e-9);
    }
}

TEST_CASE("normalize_columns names the zero column") {
    Dictionary D(2, 3, {1, 0, 0, 0, 0, 1});
    try {
        D.normalize_columns();
        FAIL("expected an exception");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
}

TEST_CASE("file-backed normalization matches in-memory normalization bit-exactly") {
    testutil::TempDir tmp;
    const std::size_t d = 9, p = 13;
    const auto m = gaussian(d * p, 21);
    write_dmat(tmp / "D.dmat", d, p, m);
    const auto F = Dictionary::open(tmp / "D.dmat").normalize_columns();
    const auto M = Dictionary(d, p, m).normalize_columns();
    CHECK(F.file_backed());
    const auto L = F.load();
    CHECK(std::memcmp(L.data().data(), M.data().data(), d * p * sizeof(double)) == 0);
}

TEST_CASE("gen_synthetic is deterministic and normalized") {
    const auto a = gen_synthetic(5, 3, 1, TargetMode::random);
    const auto b = gen_synthetic(5, 3, 1, TargetMode::random);
    CHECK(std::memcmp(a.dictionary.data().data(), b.dictionary.data().data(), 15 * sizeof(double)) == 0);
    CHECK(a.x == b.x);
    CHECK(std::abs(oracle::norm(a.x) - 1.0) <= 1e-12);

    const auto c = gen_synthetic(2, 1, 0, TargetMode::random);
    const auto col = c.dictionary.column(0);
    CHECK(std::abs(std::hypot(col[0], col[1]) - 1.0) <= 1e-9);
}

TEST_CASE("gen_synthetic in_range target lies in the column span") {
    // d > p so that range(D) is a proper subspace.
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const std::size_t d = 50, p = 20;
        const auto inst = gen_synthetic(d, p, seed, TargetMode::in_range);
        Eigen::Map<const Eigen::MatrixXd> D(inst.dictionary.data().data(), d, p);
        Eigen::Map<const Eigen::VectorXd> x(inst.x.data(), d);
        const Eigen::VectorXd coef = D.colPivHouseholderQr().solve(x);
        CHECK((D * coef - x).norm() < 1e-8);
    }
    // A random target is not in that subspace.
    const auto r = gen_synthetic(50, 20, 1, TargetMode::random);
    Eigen::Map<const Eigen::MatrixXd> D(r.dictionary.data().data(), 50, 20);
    Eigen::Map<const Eigen::VectorXd> x(r.x.data(), 50);
    CHECK((D * D.colPivHouseholderQr().solve(x) - x).norm() > 1e-3);
}

TEST_CASE("above lambda_max the solver returns zero") {
    const auto inst = gen_synthetic(20, 100, 4, TargetMode::in_range);
    const double lmax = lambda_max(inst.dictionary, inst.x).lambda_max;
    const auto sol = solve_lasso(LassoProblem{inst.dictionary, inst.x, lmax}, std::nullopt, SolverConfig{});
    for (double w : sol.w) CHECK(w == 0.0);
    const auto sol2 = solve_lasso(LassoProblem{inst.dictionary, inst.x, 1.5 * lmax}, std::nullopt, SolverConfig{});
    for (double w : sol2.w) CHECK(w == 0.0);
}

TEST_CASE("gather and correlations agree across storage kinds") {
    testutil::TempDir tmp;
    const std::size_t d = 6, p = 17;
    const auto m = gaussian(d * p, 9);
    write_dmat(tmp / "D.dmat", d, p, m);
    const auto F = Dictionary::open(tmp / "D.dmat");
    const Dictionary M(d, p, m);
    const std::vector<std::size_t> idx{16, 2, 9};
    const auto gf = F.gather(idx), gm = M.gather(idx);
    CHECK(std::memcmp(gf.data().data(), gm.data().data(), d * 3 * sizeof(double)) == 0);
    const auto x = gaussian(d, 10);
    CHECK(correlations(F, x, 4) == correlations(M, x, 4));
    CHECK(read_column(F, 5) == read_column(M, 5));
}

// ---- formats ----

TEST_CASE("DMAT and DVEC round trip bit-exactly") {
    testutil::TempDir tmp;
    std::vector<double> m{1.5, -0.0, 1e-300, 3.14159, -2e10, 7.0};
    write_dmat(tmp / "m.dmat", 2, 3, m);
    const auto r = read_dmat(tmp / "m.dmat");
    CHECK(r.rows == 2);
    CHECK(r.cols == 3);
    CHECK(std::memcmp(r.values.data(), m.data(), m.size() * sizeof(double)) == 0);
    CHECK(std::filesystem::file_size(tmp / "m.dmat") == 24 + 8 * 6);

    write_dvec(tmp / "v.dvec", m);
    const auto v = read_dvec(tmp / "v.dvec");
    CHECK(std::memcmp(v.data(), m.data(), m.size() * sizeof(double)) == 0);
    CHECK(std::filesystem::file_size(tmp / "v.dvec") == 16 + 8 * 6);
}

TEST_CASE("DMAT header is little-endian with the right magic") {
    testutil::TempDir tmp;
    write_dmat(tmp / "m.dmat", 2, 1, std::vector<double>{1.0, 2.0});
    std::ifstream in(tmp / "m.dmat", std::ios::binary);
    unsigned char bytes[40];
    in.read(reinterpret_cast<char*>(bytes), 40);
    CHECK(std::string(reinterpret_cast<char*>(bytes), 8) == "SSDMAT01");
    CHECK(bytes[8] == 2);
    for (int i = 9; i < 16; ++i) CHECK(bytes[i] == 0);
    CHECK(bytes[16] == 1);
    // 1.0 = 0x3FF0000000000000, little-endian.
    CHECK(bytes[24 + 7] == 0x3F);
    CHECK(bytes[24 + 6] == 0xF0);
}

TEST_CASE("corrupt files are rejected") {
    testutil::TempDir tmp;
    write_dmat(tmp / "m.dmat", 2, 2, std::vector<double>{1, 2, 3, 4});
    std::filesystem::resize_file(tmp / "m.dmat", 24 + 8 * 3);
    CHECK_THROWS_AS(read_dmat(tmp / "m.dmat"), IoError);
    CHECK_THROWS_AS(Dictionary::open(tmp / "m.dmat"), IoError);
    CHECK_THROWS_AS(read_dmat(tmp / "missing.dmat"), IoError);

    write_dvec(tmp / "v.dvec", std::vector<double>{1, 2});
    CHECK_THROWS_AS(read_dmat(tmp / "v.dvec"), IoError); // wrong magic

    std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
    write_dvec(tmp / "nan.dvec", bad);
    CHECK_THROWS_AS(read_dvec(tmp / "nan.dvec"), IoError);
}

TEST_CASE("CSV import is row-major text") {
    testutil::TempDir tmp;
    {
        std::ofstream out(tmp / "m.csv");
        out << "1,2,3\n4,5,6\n";
        std::ofstream xo(tmp / "x.csv");
        xo << "7\n8\n";
    }
    const auto m = read_csv_matrix(tmp / "m.csv");
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    CHECK(m.values == std::vector<double>{1, 4, 2, 5, 3, 6});
    CHECK(read_csv_vector(tmp / "x.csv") == std::vector<double>{7, 8});
    {
        std::ofstream out(tmp / "bad.csv");
        out << "1,2\n3\n";
    }
    CHECK_THROWS_AS(read_csv_matrix(tmp / "bad.csv"), IoError);
}
