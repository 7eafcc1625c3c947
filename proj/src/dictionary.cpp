// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/dictionary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "seqscreen/error.hpp"
#include "seqscreen/formats.hpp"
#include "seqscreen/kernels.hpp"
#include "seqscreen/parallel.hpp"

namespace seqscreen {

namespace {

std::vector<double> compute_norms(const Dictionary& dict) {
    std::vector<double> norms(dict.cols());
    dict.for_each_chunk(256, [&](const ColumnBlock& block) {
        for (std::size_t j = 0; j < block.width; ++j) norms[block.start + j] = kernels::norm(block.column(j));
    });
    return norms;
}

} // namespace

Dictionary::Dictionary(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("dictionary must have at least one row and one column");
    if (column_major.size() != rows * cols) {
        throw InvalidArgument("dictionary payload has " + std::to_string(column_major.size()) +
                              " values, expected " + std::to_string(rows * cols));
    }
    for (double v : column_major) {
        if (!std::isfinite(v)) throw InvalidArgument("dictionary contains a non-finite value");
    }
    data_ = std::make_shared<const std::vector<double>>(std::move(column_major));
    norms_ = std::make_shared<const std::vector<double>>(compute_norms(*this));
}

Dictionary Dictionary::open(const std::filesystem::path& dmat_path) {
    const auto header = read_dmat_header(dmat_path);
    Dictionary d;
    d.rows_ = header.rows;
    d.cols_ = header.cols;
    d.path_ = dmat_path;
    return d;
}

std::span<const double> Dictionary::data() const {
    if (!data_) throw InvalidArgument("dictionary is file-backed; stream it with chunks()");
    return *data_;
}

std::span<const double> Dictionary::column(std::size_t j) const {
    if (j >= cols_) throw InvalidArgument("column index " + std::to_string(j) + " out of range");
    return data().subspan(j * rows_, rows_);
}

Dictionary Dictionary::with_column_norms() const {
    if (norms_) return *this;
    Dictionary d = *this;
    d.norms_ = std::make_shared<const std::vector<double>>(compute_norms(*this));
    return d;
}

ColumnChunkStream Dictionary::chunks(std::size_t chunk_size) const { return ColumnChunkStream(*this, chunk_size); }

void Dictionary::for_each_chunk(std::size_t chunk_size, const std::function<void(const ColumnBlock&)>& fn) const {
    auto stream = chunks(chunk_size);
    ColumnBlock block;
    while (stream.next(block)) fn(block);
}

Dictionary Dictionary::gather(std::span<const std::size_t> indices) const {
    if (indices.empty()) throw InvalidArgument("gather: empty column selection");
    std::vector<double> out(indices.size() * rows_);
    if (data_) {
        for (std::size_t k = 0; k < indices.size(); ++k) {
            auto col = column(indices[k]);
            std::copy(col.begin(), col.end(), out.begin() + static_cast<std::ptrdiff_t>(k * rows_));
        }
    } else {
        // One pass over the file; slots sorted by source column.
        std::vector<std::pair<std::size_t, std::size_t>> order(indices.size());
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] >= cols_) throw InvalidArgument("gather: column index out of range");
            order[k] = {indices[k], k};
        }
        std::sort(order.begin(), order.end());
        std::size_t cursor = 0;
        for_each_chunk(256, [&](const ColumnBlock& block) {
            while (cursor < order.size() && order[cursor].first < block.start + block.width) {
                auto col = block.column(order[cursor].first - block.start);
                std::copy(col.begin(), col.end(),
                          out.begin() + static_cast<std::ptrdiff_t>(order[cursor].second * rows_));
                ++cursor;
            }
        });
    }
    Dictionary d(rows_, indices.size(), std::move(out));
    d.normalized_ = normalized_;
    return d;
}

Dictionary Dictionary::load() const {
    if (data_) return *this;
    std::vector<std::size_t> all(cols_);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return gather(all);
}

Dictionary Dictionary::normalize_columns() const {
    const auto norms = norms_ ? *norms_ : compute_norms(*this);
    for (std::size_t j = 0; j < cols_; ++j) {
        if (!(norms[j] > 0.0)) {
            throw InvalidArgument("cannot normalize: column " + std::to_string(j) + " is zero");
        }
    }
    Dictionary d;
    d.rows_ = rows_;
    d.cols_ = cols_;
    d.normalized_ = true;
    if (data_) {
        std::vector<double> out(*data_);
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t i = 0; i < rows_; ++i) out[j * rows_ + i] /= norms[j];
        }
        d.data_ = std::make_shared<const std::vector<double>>(std::move(out));
    } else {
        std::vector<double> scales(norms);
        if (scales_) {
            // already scaled once: compose divisors
            for (std::size_t j = 0; j < cols_; ++j) scales[j] *= (*scales_)[j];
        }
        d.path_ = path_;
        d.scales_ = std::make_shared<const std::vector<double>>(std::move(scales));
    }
    d.norms_ = std::make_shared<const std::vector<double>>(compute_norms(d));
    return d;
}

ColumnChunkStream::ColumnChunkStream(const Dictionary& dict, std::size_t chunk_size)
    : dict_(&dict), chunk_size_(chunk_size) {
    if (chunk_size == 0) throw InvalidArgument("chunk_size must be at least 1");
    chunk_size_ = std::min(chunk_size, dict.cols());
    if (dict.file_backed()) {
        in_.open(dict.path_, std::ios::binary);
        if (!in_) throw IoError("cannot open '" + dict.path_.string() + "' for reading");
        in_.seekg(static_cast<std::streamoff>(kDmatHeaderBytes));
        buffer_.resize(dict.rows() * chunk_size_);
        if constexpr (std::endian::native != std::endian::little) raw_.resize(buffer_.size() * 8);
    }
}

bool ColumnChunkStream::next(ColumnBlock& block) {
    const auto& d = *dict_;
    if (next_start_ >= d.cols()) return false;
    const std::size_t width = std::min(chunk_size_, d.cols() - next_start_);
    const std::size_t count = width * d.rows();
    block.start = next_start_;
    block.width = width;
    block.rows = d.rows();
    if (!d.file_backed()) {
        block.values = std::span<const double>(*d.data_).subspan(next_start_ * d.rows(), count);
    } else {
        const auto bytes = static_cast<std::streamsize>(count * sizeof(double));
        if constexpr (std::endian::native == std::endian::little) {
            in_.read(reinterpret_cast<char*>(buffer_.data()), bytes);
        } else {
            in_.read(reinterpret_cast<char*>(raw_.data()), bytes);
            detail::decode_f64_le(raw_.data(), count, buffer_.data());
        }
        if (!in_) throw IoError("short read in '" + d.path_.string() + "'");
        std::span<double> values(buffer_.data(), count);
        detail::check_finite(values, d.path_);
        if (d.scales_) {
            for (std::size_t j = 0; j < width; ++j) {
                const double s = (*d.scales_)[next_start_ + j];
                for (std::size_t i = 0; i < d.rows(); ++i) values[j * d.rows() + i] /= s;
            }
        }
        block.values = values;
    }
    next_start_ += width;
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> chunk_partition(std::size_t p, std::size_t chunk_size) {
    if (chunk_size == 0) throw InvalidArgument("chunk_size must be at least 1");
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    for (std::size_t s = 0; s < p; s += chunk_size) parts.emplace_back(s, std::min(chunk_size, p - s));
    return parts;
}

std::vector<double> correlations(const Dictionary& dict, std::span<const double> x, std::size_t chunk_size) {
    if (x.size() != dict.rows()) {
        throw InvalidArgument("target has length " + std::to_string(x.size()) + ", dictionary has " +
                              std::to_string(dict.rows()) + " rows");
    }
    std::vector<double> corr(dict.cols());
    if (dict.file_backed()) {
        dict.for_each_chunk(chunk_size, [&](const ColumnBlock& block) {
            for (std::size_t j = 0; j < block.width; ++j) corr[block.start + j] = kernels::dot(block.column(j), x);
        });
        return corr;
    }
    const auto parts = chunk_partition(dict.cols(), chunk_size);
    parallel_for(parts.size(), [&](std::size_t t) {
        const auto [start, width] = parts[t];
        for (std::size_t j = start; j < start + width; ++j) corr[j] = kernels::dot(dict.column(j), x);
    });
    return corr;
}

LambdaMaxResult lambda_max(const Dictionary& dict, std::span<const double> x, std::size_t chunk_size) {
    if (x.size() != dict.rows()) {
        throw InvalidArgument("target has length " + std::to_string(x.size()) + ", dictionary has " +
                              std::to_string(dict.rows()) + " rows");
    }
    if (kernels::max_abs(x) == 0.0) throw InvalidArgument("target vector is zero");
    const auto corr = correlations(dict, x, chunk_size);
    LambdaMaxResult best;
    best.lambda_max = -1.0;
    for (std::size_t i = 0; i < corr.size(); ++i) {
        if (std::abs(corr[i]) > best.lambda_max) {
            best.lambda_max = std::abs(corr[i]);
            best.argmax_index = i;
            best.sign = corr[i] < 0.0 ? -1 : 1;
        }
    }
    return best;
}

std::vector<double> read_column(const Dictionary& dict, std::size_t j) {
    if (j >= dict.cols()) throw InvalidArgument("column index " + std::to_string(j) + " out of range");
    if (!dict.file_backed()) {
        auto c = dict.column(j);
        return {c.begin(), c.end()};
    }
    const std::size_t idx[] = {j};
    auto one = dict.gather(idx);
    auto c = one.column(0);
    return {c.begin(), c.end()};
}

SyntheticInstance gen_synthetic(std::size_t d, std::size_t p, std::uint64_t seed, TargetMode mode) {
    if (d == 0 || p == 0) throw InvalidArgument("gen_synthetic: d and p must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> values(d * p);
    for (auto& v : values) v = normal(rng);
    Dictionary dict = Dictionary(d, p, std::move(values)).normalize_columns();

    std::vector<double> x(d, 0.0);
    double nrm = 0.0;
    while (!(nrm > 0.0)) {
        std::fill(x.begin(), x.end(), 0.0);
        if (mode == TargetMode::random) {
            for (auto& v : x) v = normal(rng);
        } else {
            const auto tenth = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(p)));
            const std::size_t support = std::clamp<std::size_t>(tenth, 1, std::min(d, p));
            std::vector<std::size_t> idx(p);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t k = 0; k < support; ++k) {
                kernels::axpy(normal(rng), dict.column(idx[k]), x);
            }
        }
        nrm = kernels::norm(x);
    }
    for (auto& v : x) v /= nrm;
    return {std::move(dict), std::move(x)};
}

} // namespace seqscreen
