#include "spectra/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

namespace {

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '%') {
            return true;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError("empty Matrix Market stream", 1);
    }
    ++line_no;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
        throw ParseError("missing %%MatrixMarket banner", line_no);
    }
    object = lowered(object);
    format = lowered(format);
    field = lowered(field);
    symmetry = lowered(symmetry);
    if (object != "matrix" || format != "coordinate") {
        throw ParseError("only 'matrix coordinate' files are supported", line_no);
    }
    if (field == "complex") {
        throw ParseError("complex matrices are not supported", line_no);
    }
    if (field != "real" && field != "integer") {
        throw ParseError("unsupported field '" + field + "'", line_no);
    }
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general") {
        throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
    }

    std::size_t rows = 0, cols = 0, entries = 0;
    bool have_size = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) {
            continue;
        }
        std::istringstream size_line(line);
        if (!(size_line >> rows >> cols >> entries)) {
            throw ParseError("malformed size line", line_no);
        }
        have_size = true;
        break;
    }
    if (!have_size) {
        throw ParseError("missing size line", line_no);
    }
    if (rows != cols) {
        throw ParseError("matrix is not square (" + std::to_string(rows) + " x " + std::to_string(cols) + ")",
                         line_no);
    }

    std::vector<Triplet> triplets;
    triplets.reserve(symmetric ? 2 * entries : entries);
    std::size_t read = 0;
    while (read < entries && std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) {
            continue;
        }
        std::istringstream entry(line);
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (!(entry >> i >> j >> v)) {
            throw ParseError("malformed entry", line_no);
        }
        if (i < 1 || j < 1 || i > rows || j > cols) {
            throw ParseError("entry index out of range", line_no);
        }
        triplets.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) {
            triplets.push_back({j - 1, i - 1, v});
        }
        ++read;
    }
    if (read != entries) {
        throw ParseError("expected " + std::to_string(entries) + " entries, found " + std::to_string(read), line_no);
    }
    return CsrMatrix::from_triplets(rows, triplets);
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'", 0);
    }
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
    const bool symmetric = a.is_symmetric(0.0);
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto va = a.values();

    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
            if (!symmetric || ci[p] <= i) {
                ++count;
            }
        }
    }
    out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
    out << a.size() << ' ' << a.size() << ' ' << count << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
            if (!symmetric || ci[p] <= i) {
                out << i + 1 << ' ' << ci[p] + 1 << ' ' << va[p] << '\n';
            }
        }
    }
}

}  // namespace spectra
