// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// Binary matrix/vector files.
//
//   DMAT: "SSDMAT01" | rows u64 LE | cols u64 LE | rows*cols f64 LE, column-major
//   DVEC: "SSDVEC01" | length u64 LE | length f64 LE
//
// All payload values must be finite; file size must match the header exactly.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace seqscreen {

inline constexpr std::string_view kDmatMagic = "SSDMAT01";
inline constexpr std::string_view kDvecMagic = "SSDVEC01";
inline constexpr std::size_t kDmatHeaderBytes = 24;
inline constexpr std::size_t kDvecHeaderBytes = 16;

struct DmatHeader {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
};

/// Validates magic and size, returns the shape. Does not read the payload.
DmatHeader read_dmat_header(const std::filesystem::path& path);

struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // column-major
};

DenseMatrix read_dmat(const std::filesystem::path& path);
void write_dmat(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                std::span<const double> column_major);

std::vector<double> read_dvec(const std::filesystem::path& path);
void write_dvec(const std::filesystem::path& path, std::span<const double> values);

/// Header-free, comma separated, one matrix row per line (row-major text).
DenseMatrix read_csv_matrix(const std::filesystem::path& path);
/// One value per line, or a single comma-separated line.
std::vector<double> read_csv_vector(const std::filesystem::path& path);

namespace detail {
// Little-endian decode of `count` doubles from raw bytes.
void decode_f64_le(const unsigned char* bytes, std::size_t count, double* out);
void check_finite(std::span<const double> values, const std::filesystem::path& path);
} // namespace detail

} // namespace seqscreen
