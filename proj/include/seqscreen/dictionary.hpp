// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace seqscreen {

/// Contiguous run of dictionary columns, column-major.
struct ColumnBlock {
    std::size_t start = 0; // global index of the first column (0-based)
    std::size_t width = 0;
    std::size_t rows = 0;
    std::span<const double> values;

    std::span<const double> column(std::size_t j) const { return values.subspan(j * rows, rows); }
};

class ColumnChunkStream;

/// A d x p dictionary, either held in memory (column-major) or backed by a
/// DMAT file that is streamed in column blocks. Immutable after construction;
/// copies share storage.
class Dictionary {
  public:
    /// In-memory dictionary; `column_major` must hold rows*cols finite values.
    Dictionary(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    /// File-backed dictionary over a DMAT file. Only the header is read here.
    static Dictionary open(const std::filesystem::path& dmat_path);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool file_backed() const { return !data_; }
    bool normalized() const { return normalized_; }

    /// Whole column-major payload; throws InvalidArgument when file-backed.
    std::span<const double> data() const;
    /// Column j; throws InvalidArgument when file-backed.
    std::span<const double> column(std::size_t j) const;

    /// Cached column norms, if computed (always present for in-memory dictionaries).
    const std::vector<double>* column_norms() const { return norms_.get(); }
    /// Copy with column norms cached (one streaming pass for file-backed storage).
    Dictionary with_column_norms() const;

    /// Sequential column blocks of width `chunk_size` (last may be narrower).
    /// Throws InvalidArgument when chunk_size == 0.
    ColumnChunkStream chunks(std::size_t chunk_size) const;
    void for_each_chunk(std::size_t chunk_size,
                        const std::function<void(const ColumnBlock&)>& fn) const;

    /// In-memory dictionary holding the listed columns in the given order.
    Dictionary gather(std::span<const std::size_t> indices) const;
    /// In-memory copy of the whole dictionary.
    Dictionary load() const;

    /// Each column divided by its l2 norm; throws InvalidArgument naming the first
    /// zero column. File-backed dictionaries stay file-backed and scale on read.
    Dictionary normalize_columns() const;

  private:
    friend class ColumnChunkStream;
    Dictionary() = default;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::shared_ptr<const std::vector<double>> data_;
    std::filesystem::path path_;
    std::shared_ptr<const std::vector<double>> scales_; // per-column divisor applied on read
    std::shared_ptr<const std::vector<double>> norms_;
    bool normalized_ = false;
};

/// Pull-style block iterator. For file-backed storage one buffer of
/// rows*chunk_size doubles is allocated and reused; in-memory blocks are views.
class ColumnChunkStream {
  public:
    ColumnChunkStream(const Dictionary& dict, std::size_t chunk_size);

    /// Fills `block` with the next block; returns false once all columns are served.
    bool next(ColumnBlock& block);
    /// Bytes held by the read buffer (0 for in-memory storage).
    std::size_t buffer_bytes() const { return buffer_.capacity() * sizeof(double); }
    std::size_t chunk_size() const { return chunk_size_; }

  private:
    const Dictionary* dict_;
    std::size_t chunk_size_;
    std::size_t next_start_ = 0;
    std::ifstream in_;
    std::vector<double> buffer_;
    std::vector<unsigned char> raw_;
};

/// Partition of [0, p) into blocks: (start, width) pairs.
std::vector<std::pair<std::size_t, std::size_t>> chunk_partition(std::size_t p, std::size_t chunk_size);

struct LambdaMaxResult {
    double lambda_max = 0.0;
    std::size_t argmax_index = 0; // 0-based, lowest index among ties
    int sign = 1;                 // sign of a_*^T x
};

/// lambda_max = max_i |a_i^T x|. Throws InvalidArgument on dimension mismatch or x == 0.
LambdaMaxResult lambda_max(const Dictionary& dict, std::span<const double> x,
                           std::size_t chunk_size = 256);

/// All correlations a_i^T x, streaming the dictionary.
std::vector<double> correlations(const Dictionary& dict, std::span<const double> x,
                                 std::size_t chunk_size = 256);

/// Reads column j (works for either storage).
std::vector<double> read_column(const Dictionary& dict, std::size_t j);

enum class TargetMode { random, in_range };

struct SyntheticInstance {
    Dictionary dictionary;
    std::vector<double> x;
};

/// Standard normal columns normalized to unit norm; x random unit or in range(D)
/// via a sparse w0 (10% support, capped at min(d, p)). Deterministic in `seed`.
SyntheticInstance gen_synthetic(std::size_t d, std::size_t p, std::uint64_t seed, TargetMode mode);

} // namespace seqscreen
