#include "steinauth/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "steinauth/error.hpp"

namespace steinauth {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next line as integers; skips leading comments before the header only.
    std::vector<long long> next(const char* what, bool allow_comments) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (allow_comments && !line.empty() && line[0] == '#') continue;
            std::istringstream ss(line);
            std::vector<long long> values;
            std::string tok;
            while (ss >> tok) {
                std::size_t used = 0;
                long long x = 0;
                try {
                    x = std::stoll(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size()) fail(ErrorKind::Parse, where() + ": '" + tok + "' is not an integer");
                values.push_back(x);
            }
            return values;
        }
        fail(ErrorKind::Parse, std::string("unexpected end of input while reading ") + what);
    }

    void expect_end() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") != std::string::npos) fail(ErrorKind::Parse, where() + ": trailing content");
        }
    }

    std::string where() const { return "line " + std::to_string(line_no_); }

private:
    std::istream& in_;
    int line_no_ = 0;
};

}  // namespace

Design read_design(std::istream& in) {
    LineReader reader(in);
    const auto header = reader.next("design header", true);
    if (header.size() != 5) fail(ErrorKind::Parse, reader.where() + ": design header needs 't v k lambda b'");
    if (std::any_of(header.begin(), header.end(), [](long long x) { return x < 0 || x > 1'000'000'000LL; }))
        fail(ErrorKind::Parse, reader.where() + ": design header values out of range");
    Design d{static_cast<int>(header[0]), static_cast<int>(header[1]), static_cast<int>(header[2]),
             static_cast<std::uint64_t>(header[3]), {}};
    const auto b = static_cast<std::size_t>(header[4]);
    d.blocks.reserve(b);
    for (std::size_t i = 0; i < b; ++i) {
        const auto values = reader.next("block", false);
        if (values.size() != static_cast<std::size_t>(d.k))
            fail(ErrorKind::Parse, reader.where() + ": block needs " + std::to_string(d.k) + " points");
        Subset blk;
        for (long long x : values) {
            if (x < 0 || x >= d.v) fail(ErrorKind::Parse, reader.where() + ": point " + std::to_string(x) + " out of range");
            blk.push_back(static_cast<Point>(x));
        }
        d.blocks.push_back(std::move(blk));
    }
    reader.expect_end();
    d.check_structure();
    return d;
}

void write_design(std::ostream& out, const Design& design) {
    Design canonical = design;
    canonical.canonicalize();
    canonical.check_structure();
    out << canonical.t << ' ' << canonical.v << ' ' << canonical.k << ' ' << canonical.lambda << ' ' << canonical.b() << '\n';
    for (const Subset& blk : canonical.blocks) {
        for (std::size_t i = 0; i < blk.size(); ++i) out << (i ? " " : "") << blk[i];
        out << '\n';
    }
}

EncodingMatrix read_matrix(std::istream& in) {
    LineReader reader(in);
    const auto header = reader.next("matrix header", true);
    if (header.size() != 3) fail(ErrorKind::Parse, reader.where() + ": matrix header needs 'v k b'");
    if (std::any_of(header.begin(), header.end(), [](long long x) { return x < 0 || x > 1'000'000'000LL; }))
        fail(ErrorKind::Parse, reader.where() + ": matrix header values out of range");
    EncodingMatrix m{static_cast<int>(header[0]), static_cast<int>(header[1]), {}};
    const auto b = static_cast<std::size_t>(header[2]);
    m.rows.reserve(b);
    for (std::size_t i = 0; i < b; ++i) {
        const auto values = reader.next("matrix row", false);
        if (values.size() != static_cast<std::size_t>(m.k))
            fail(ErrorKind::Parse, reader.where() + ": row needs " + std::to_string(m.k) + " messages");
        std::vector<Point> row;
        for (long long x : values) {
            if (x < 0 || x >= m.v) fail(ErrorKind::Parse, reader.where() + ": message " + std::to_string(x) + " out of range");
            row.push_back(static_cast<Point>(x));
        }
        m.rows.push_back(std::move(row));
    }
    reader.expect_end();
    m.check();
    return m;
}

void write_matrix(std::ostream& out, const EncodingMatrix& matrix) {
    matrix.check();
    out << matrix.v << ' ' << matrix.k << ' ' << matrix.b() << '\n';
    for (const auto& row : matrix.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << '\n';
    }
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

Design read_design_file(const std::string& path) {
    auto in = open_input(path);
    return read_design(in);
}

EncodingMatrix read_matrix_file(const std::string& path) {
    auto in = open_input(path);
    return read_matrix(in);
}

void write_design_file(const std::string& path, const Design& design) {
    std::ostringstream ss;
    write_design(ss, design);
    write_file_atomic(path, ss.str());
}

void write_matrix_file(const std::string& path, const EncodingMatrix& matrix) {
    std::ostringstream ss;
    write_matrix(ss, matrix);
    write_file_atomic(path, ss.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::Io, "write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        fail(ErrorKind::Io, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

}  // namespace steinauth
