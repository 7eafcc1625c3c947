// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/formats.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "seqscreen/error.hpp"

namespace seqscreen {

namespace {

std::uint64_t load_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void store_u64_le(std::uint64_t v, unsigned char* p) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<unsigned char>(v & 0xffu);
        v >>= 8;
    }
}

void encode_f64_le(std::span<const double> values, unsigned char* out) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        store_u64_le(std::bit_cast<std::uint64_t>(values[i]), out + 8 * i);
    }
}

std::uintmax_t file_size_or_throw(const std::filesystem::path& path) {
    std::error_code ec;
    auto size = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat '" + path.string() + "': " + ec.message());
    return size;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

void write_all(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<double> parse_csv_line(const std::string& line, const std::filesystem::path& path,
                                   std::size_t line_no) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        if (b == std::string::npos) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": empty field");
        }
        field = field.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != field.size() || !std::isfinite(v)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad value '" + field + "'");
        }
        row.push_back(v);
    }
    return row;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

} // namespace

namespace detail {

void decode_f64_le(const unsigned char* bytes, std::size_t count, double* out) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out, bytes, count * sizeof(double));
    } else {
        for (std::size_t i = 0; i < count; ++i) out[i] = std::bit_cast<double>(load_u64_le(bytes + 8 * i));
    }
}

void check_finite(std::span<const double> values, const std::filesystem::path& path) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw IoError("non-finite value at payload index " + std::to_string(i) + " in '" +
                          path.string() + "'");
        }
    }
}

} // namespace detail

DmatHeader read_dmat_header(const std::filesystem::path& path) {
    auto in = open_input(path);
    unsigned char header[kDmatHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kDmatHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kDmatHeaderBytes)) {
        throw IoError("'" + path.string() + "' is too short for a DMAT header");
    }
    if (std::memcmp(header, kDmatMagic.data(), 8) != 0) {
        throw IoError("'" + path.string() + "' is not a DMAT file (bad magic)");
    }
    DmatHeader h{load_u64_le(header + 8), load_u64_le(header + 16)};
    if (h.rows == 0 || h.cols == 0) throw IoError("'" + path.string() + "' has an empty shape");
    if (h.rows > (std::uint64_t{1} << 40) / h.cols) {
        throw IoError("'" + path.string() + "' declares an implausible shape");
    }
    const auto expected = kDmatHeaderBytes + 8 * h.rows * h.cols;
    if (file_size_or_throw(path) != expected) {
        throw IoError("'" + path.string() + "' size does not match its " + std::to_string(h.rows) + "x" +
                      std::to_string(h.cols) + " header");
    }
    return h;
}

DenseMatrix read_dmat(const std::filesystem::path& path) {
    const auto h = read_dmat_header(path);
    auto in = open_input(path);
    in.seekg(static_cast<std::streamoff>(kDmatHeaderBytes));
    const std::size_t count = h.rows * h.cols;
    std::vector<unsigned char> raw(count * 8);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("short read in '" + path.string() + "'");
    DenseMatrix m{h.rows, h.cols, std::vector<double>(count)};
    detail::decode_f64_le(raw.data(), count, m.values.data());
    detail::check_finite(m.values, path);
    return m;
}

void write_dmat(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                std::span<const double> column_major) {
    if (rows == 0 || cols == 0 || column_major.size() != rows * cols) {
        throw InvalidArgument("write_dmat: shape does not match payload length");
    }
    std::vector<unsigned char> bytes(kDmatHeaderBytes + 8 * column_major.size());
    std::memcpy(bytes.data(), kDmatMagic.data(), 8);
    store_u64_le(rows, bytes.data() + 8);
    store_u64_le(cols, bytes.data() + 16);
    encode_f64_le(column_major, bytes.data() + kDmatHeaderBytes);
    write_all(path, bytes);
}

std::vector<double> read_dvec(const std::filesystem::path& path) {
    auto in = open_input(path);
    unsigned char header[kDvecHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kDvecHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kDvecHeaderBytes)) {
        throw IoError("'" + path.string() + "' is too short for a DVEC header");
    }
    if (std::memcmp(header, kDvecMagic.data(), 8) != 0) {
        throw IoError("'" + path.string() + "' is not a DVEC file (bad magic)");
    }
    const std::uint64_t length = load_u64_le(header + 8);
    if (length > (std::uint64_t{1} << 40)) throw IoError("'" + path.string() + "' declares an implausible length");
    if (file_size_or_throw(path) != kDvecHeaderBytes + 8 * length) {
        throw IoError("'" + path.string() + "' size does not match its header length " + std::to_string(length));
    }
    std::vector<unsigned char> raw(length * 8);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("short read in '" + path.string() + "'");
    std::vector<double> v(length);
    detail::decode_f64_le(raw.data(), length, v.data());
    detail::check_finite(v, path);
    return v;
}

void write_dvec(const std::filesystem::path& path, std::span<const double> values) {
    std::vector<unsigned char> bytes(kDvecHeaderBytes + 8 * values.size());
    std::memcpy(bytes.data(), kDvecMagic.data(), 8);
    store_u64_le(values.size(), bytes.data() + 8);
    encode_f64_le(values, bytes.data() + kDvecHeaderBytes);
    write_all(path, bytes);
}

DenseMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        rows.push_back(parse_csv_line(line, path, line_no));
        if (rows.back().size() != rows.front().size()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
        }
    }
    if (rows.empty()) throw IoError("'" + path.string() + "' holds no rows");
    DenseMatrix m{rows.size(), rows.front().size(), {}};
    m.values.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) m.values[j * m.rows + i] = rows[i][j];
    }
    return m;
}

std::vector<double> read_csv_vector(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<double> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        auto row = parse_csv_line(line, path, line_no);
        v.insert(v.end(), row.begin(), row.end());
    }
    if (v.empty()) throw IoError("'" + path.string() + "' holds no values");
    return v;
}

} // namespace seqscreen
