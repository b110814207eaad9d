#include "metdich/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace metdich {

namespace {

std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& labels) {
    if (values.rows() != values.cols() || static_cast<std::size_t>(values.rows()) != labels.size())
        throw std::invalid_argument("write_matrix: shape mismatch");
    out << values.rows() << '\n';
    for (const auto& l : labels) {
        if (l.empty() || l.find_first_of(" \t\r\n") != std::string::npos)
            throw std::invalid_argument("write_matrix: labels must be non-empty tokens");
        out << l << '\n';
    }
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j) out << ' ';
            out << format_exact(values(i, j));
        }
        out << '\n';
    }
}

LabeledMatrix read_matrix(std::istream& in) {
    long long n = -1;
    if (!(in >> n) || n < 0) throw std::runtime_error("matrix text: expected point count");
    LabeledMatrix m;
    m.labels.resize(static_cast<std::size_t>(n));
    for (auto& l : m.labels)
        if (!(in >> l)) throw std::runtime_error("matrix text: missing label");
    m.values.resize(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::runtime_error("matrix text: missing entry");
            try {
                std::size_t used = 0;
                m.values(i, j) = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw std::runtime_error("matrix text: bad number '" + tok + "'");
            }
        }
    return m;
}

void write_metric(std::ostream& out, const MetricSpace& space) {
    write_matrix(out, space.distances(), space.labels());
}

std::string to_text(const MetricSpace& space) {
    std::ostringstream s;
    write_metric(s, space);
    return s.str();
}

MetricSpace read_metric(std::istream& in) {
    auto m = read_matrix(in);
    return validate_metric(m.values, std::move(m.labels));
}

MetricSpace parse_metric(const std::string& text) {
    std::istringstream s(text);
    return read_metric(s);
}

MetricSpace load_metric(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_metric(in);
}

void save_metric(const std::filesystem::path& path, const MetricSpace& space) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_metric(out, space);
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_digest(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest(const MetricSpace& space) { return hex_digest(fnv1a(to_text(space))); }

std::string witness_hash(std::span<const Index> witness) {
    std::string s;
    for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(witness[i]);
    }
    return hex_digest(fnv1a(s));
}

}  // namespace metdich
