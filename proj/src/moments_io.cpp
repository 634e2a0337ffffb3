#include "auxmean/moments_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace auxmean {

std::string format_double17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw std::invalid_argument(std::string(what) + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument(std::string(what) + " must be a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw std::invalid_argument(std::string(what) + " rows must be arrays of equal length");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
        }
    }
    return m;
}

void append_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
    out << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out << ',';
        out << format_double17(v(i));
    }
    out << ']';
}

void append_matrix(std::ostringstream& out, const Eigen::MatrixXd& m) {
    out << '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i > 0) out << ',';
        out << '[';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double17(m(i, j));
        }
        out << ']';
    }
    out << ']';
}

void append_moments(std::ostringstream& out, const GaussianMoments& moments) {
    out << "{\"mean\":";
    append_vector(out, moments.mean);
    out << ",\"cov\":";
    append_matrix(out, moments.cov);
    out << '}';
}

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

GaussianMoments moments_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("mean") || !j.contains("cov")) {
        throw std::invalid_argument("moments JSON must be an object with mean and cov");
    }
    return make_moments(vector_from_json(j["mean"], "mean"), matrix_from_json(j["cov"], "cov"));
}

std::pair<GaussianMoments, GaussianMoments> moment_pair_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("q")) {
        throw std::invalid_argument("moment-pair JSON must be an object with p and q");
    }
    return {moments_from_json(j["p"]), moments_from_json(j["q"])};
}

std::string moments_to_json(const GaussianMoments& moments) {
    std::ostringstream out;
    append_moments(out, moments);
    return out.str();
}

std::string adversary_to_json(const AdversaryPair& pair, double s,
                              const std::string& construction) {
    std::ostringstream out;
    out << "{\"p\":";
    append_moments(out, pair.p);
    out << ",\"q\":";
    append_moments(out, pair.q);
    out << ",\"mean_shift_sq\":" << format_double17(pair.mean_shift_sq)
        << ",\"cov_budget_sq\":" << format_double17(pair.cov_budget_sq)
        << ",\"s\":" << format_double17(s) << ",\"construction\":\""
        << escape_json(construction) << "\"}";
    return out.str();
}

std::string report_to_json_line(const OracleReport& report) {
    std::ostringstream out;
    out << "{\"quantity\":\"" << escape_json(report.quantity)
        << "\",\"closed_form\":" << format_double17(report.closed_form)
        << ",\"oracle_value\":" << format_double17(report.oracle_value)
        << ",\"abs_gap\":" << format_double17(report.abs_gap)
        << ",\"tolerance\":" << format_double17(report.tolerance)
        << ",\"passed\":" << (report.passed ? "true" : "false") << '}';
    return out.str();
}

}  // namespace auxmean
