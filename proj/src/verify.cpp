#include "auxmean/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "auxmean/adversary.hpp"
#include "auxmean/rng.hpp"

namespace auxmean {

GoldenSectionResult golden_section_min(const std::function<double(double)>& f, double lo,
                                       double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_min: requires lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_min: requires tol > 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);

    // ~48 iterations close a unit bracket to 1e-10; cap well above that.
    for (int iter = 0; iter < 400 && (b - a) > tol; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double argmin = 0.5 * (a + b);
    return GoldenSectionResult{argmin, f(argmin)};
}

namespace {

double relative_gap(double reference, double value) {
    const double scale = std::max(std::abs(reference), 1e-300);
    return std::abs(reference - value) / scale;
}

OracleReport make_report(std::string quantity, double closed_form, double oracle_value,
                         double abs_gap, double tolerance) {
    OracleReport report;
    report.quantity = std::move(quantity);
    report.closed_form = closed_form;
    report.oracle_value = oracle_value;
    report.abs_gap = abs_gap;
    report.tolerance = tolerance;
    report.passed = abs_gap <= tolerance;
    return report;
}

std::string spec_tag(const ProblemSpec& spec) {
    std::ostringstream tag;
    tag << to_string(spec.mode) << ",n=" << spec.n << ",N=" << spec.N << ",d=" << spec.d;
    return tag.str();
}

}  // namespace

OracleReport check_scalar_optimum(const ProblemSpec& spec) {
    spec.validate();
    const auto objective = [&spec](double s) { return scalar_objective(spec, s); };
    const GoldenSectionResult oracle = golden_section_min(objective, 0.0, 1.0, 1e-10);

    const double s_star = optimal_weight(spec);
    const double risk_star = minmax_risk(spec).risk_star;

    const double weight_tol = 1e-7;
    const double risk_tol = 1e-9;
    const double weight_gap = std::abs(s_star - oracle.argmin);
    const double risk_gap = relative_gap(risk_star, oracle.min);

    // Report whichever comparison sits closer to its tolerance.
    if (weight_gap / weight_tol >= risk_gap / risk_tol) {
        return make_report("scalar_optimum.weight(" + spec_tag(spec) + ")", s_star,
                           oracle.argmin, weight_gap, weight_tol);
    }
    return make_report("scalar_optimum.risk(" + spec_tag(spec) + ")", risk_star, oracle.min,
                       risk_gap, risk_tol);
}

OracleReport check_matrix_optimum(const ProblemSpec& spec, int trials, double perturb_scale,
                                  std::uint64_t seed) {
    spec.validate();
    if (trials < 1) throw std::invalid_argument("check_matrix_optimum: trials must be >= 1");

    const double s_star = optimal_weight(spec);
    const Eigen::MatrixXd center =
        s_star * Eigen::MatrixXd::Identity(spec.d, spec.d);
    const double center_value = matrix_objective(spec, center);

    double best = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd noise(spec.d, spec.d);
    for (int trial = 0; trial < trials; ++trial) {
        NormalStream stream(mix_seed(seed, static_cast<std::uint64_t>(trial)));
        for (Eigen::Index i = 0; i < noise.rows(); ++i) {
            for (Eigen::Index j = 0; j < noise.cols(); ++j) noise(i, j) = stream.next();
        }
        Eigen::MatrixXd perturbation;
        switch (trial % 3) {
            case 0: perturbation = noise; break;
            case 1: perturbation = 0.5 * (noise + noise.transpose()); break;
            // Diagonal perturbations reach unequal singular values directly.
            default: perturbation = noise.diagonal().asDiagonal(); break;
        }
        const double value = matrix_objective(spec, center + perturb_scale * perturbation);
        best = std::min(best, value);
    }

    const double gap = std::max(0.0, center_value - best);
    return make_report("matrix_optimum(" + spec_tag(spec) + ")", center_value, best, gap, 1e-9);
}

std::vector<double> check_unbounded_without_sum_constraint(const Eigen::MatrixXd& A,
                                                           const Eigen::MatrixXd& B,
                                                           const std::vector<double>& scale_sequence) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw std::invalid_argument("check_unbounded: A and B must be square with equal size");
    }
    const Eigen::Index d = A.rows();
    const Eigen::MatrixXd defect = A + B - Eigen::MatrixXd::Identity(d, d);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(defect.transpose() * defect);
    const Eigen::Index top = gram.eigenvalues().size() - 1;  // Eigen sorts nondecreasing
    const double smax = std::sqrt(std::max(gram.eigenvalues()(top), 0.0));
    if (smax <= 1e-6) {
        throw std::invalid_argument("constraint satisfied; nothing to demonstrate");
    }
    const Eigen::VectorXd principal = gram.eigenvectors().col(top);

    const GaussianMoments unit_cov{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d)};
    std::vector<double> risks;
    risks.reserve(scale_sequence.size());
    for (double t : scale_sequence) {
        GaussianMoments shifted{t * principal, unit_cov.cov};
        risks.push_back(risk_from_moments(MatrixPair{A, B}, shifted, shifted, 1, 1));
    }
    return risks;
}

OracleReport check_adversary_optimality(const ProblemSpec& spec, double s, int trials,
                                        std::uint64_t seed) {
    spec.validate();
    if (trials < 1) throw std::invalid_argument("check_adversary_optimality: trials must be >= 1");

    const AdversaryPair reference = worst_case_large_n(spec, s);
    const double reference_risk =
        risk_from_moments(ScalarWeight{s}, reference.p, reference.q, spec.n, spec.N);

    const double eps_sq = spec.eps * spec.eps;
    const double cov_trace = reference.p.cov.trace();
    const double shrink = static_cast<double>(spec.N) - 1.0;
    const double tolerance = 1e-6 + (spec.N >= 2 ? 5.0 * cov_trace / (shrink * shrink)
                                                 : 5.0 * cov_trace);

    double worst_trial = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        NormalStream stream(mix_seed(seed, static_cast<std::uint64_t>(trial)));

        // Spend a random split of the squared budget on a covariance rescale
        // Sq = b^2 Sp (cost (1-b)^2 Tr(Sp)) and the rest on a mean shift, so
        // every trial sits exactly on the budget sphere.
        const double cov_spend = stream.uniform() * eps_sq;
        const double offset = std::sqrt(cov_spend / cov_trace);
        const bool shrink_cov = stream.uniform() < 0.5 && offset <= 1.0;
        const double scale = shrink_cov ? 1.0 - offset : 1.0 + offset;
        const double mean_shift = std::sqrt(std::max(eps_sq - cov_spend, 0.0));
        const Eigen::VectorXd direction = stream.unit_vector(spec.d);

        GaussianMoments trial_q{reference.p.mean + mean_shift * direction,
                                (scale * scale) * reference.p.cov};
        const double risk =
            risk_from_moments(ScalarWeight{s}, reference.p, trial_q, spec.n, spec.N);
        worst_trial = std::max(worst_trial, risk);
    }

    const double gap = std::max(0.0, worst_trial - reference_risk);
    return make_report("adversary_optimality(" + spec_tag(spec) + ")", reference_risk,
                       worst_trial, gap, tolerance);
}

ProblemSpec random_spec(NormMode mode, std::uint64_t seed, std::uint64_t index) {
    NormalStream stream(mix_seed(seed, index, 0x5350454353ULL));
    const auto log_uniform = [&stream](double lo, double hi) {
        return lo * std::exp(stream.uniform() * std::log(hi / lo));
    };

    ProblemSpec spec;
    spec.mode = mode;
    spec.n = static_cast<long>(std::llround(log_uniform(1.0, 1e4)));
    spec.N = static_cast<long>(std::llround(log_uniform(1.0, 1e4)));
    spec.d = static_cast<int>(std::llround(log_uniform(1.0, 500.0)));
    spec.delta_sq = log_uniform(0.25, 4.0);
    spec.eps = std::sqrt(log_uniform(1e-4, 1e4) * spec.delta_sq);
    spec.validate();
    return spec;
}

namespace {

std::vector<OracleReport> scalar_suite(std::uint64_t seed) {
    std::vector<OracleReport> reports;
    for (NormMode mode : {NormMode::Frobenius, NormMode::Trace, NormMode::Operator}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            reports.push_back(check_scalar_optimum(random_spec(mode, seed, i)));
        }
    }
    return reports;
}

std::vector<OracleReport> matrix_suite(std::uint64_t seed) {
    std::vector<OracleReport> reports;
    for (NormMode mode : {NormMode::Frobenius, NormMode::Trace, NormMode::Operator}) {
        for (int d : {2, 3, 5}) {
            ProblemSpec spec;
            spec.n = 20;
            spec.N = 1000;
            spec.d = d;
            spec.eps = 1.0;
            spec.delta_sq = 1.0;
            spec.mode = mode;
            reports.push_back(check_matrix_optimum(spec, 1000, 0.1, mix_seed(seed, d)));
        }
    }
    return reports;
}

std::vector<OracleReport> adversary_suite(std::uint64_t seed) {
    std::vector<OracleReport> reports;
    for (NormMode mode : {NormMode::Frobenius, NormMode::Trace, NormMode::Operator}) {
        for (int d : {1, 2, 3, 5}) {
            ProblemSpec spec;
            spec.n = 20;
            spec.N = 10000;
            spec.d = d;
            spec.eps = 1.0;
            spec.delta_sq = 1.0;
            spec.mode = mode;
            const double s = optimal_weight(spec);
            reports.push_back(check_adversary_optimality(spec, s, 500, mix_seed(seed, d)));
        }
    }
    return reports;
}

std::vector<OracleReport> unbounded_suite(std::uint64_t seed) {
    const int d = 3;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
    std::vector<std::pair<std::string, std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>> cases;
    cases.emplace_back("A=I,B=I", std::make_pair(identity, identity));
    cases.emplace_back("A=0,B=0", std::make_pair(Eigen::MatrixXd::Zero(d, d),
                                                 Eigen::MatrixXd::Zero(d, d)));
    cases.emplace_back("A=0.5I,B=0.8I", std::make_pair(0.5 * identity, 0.8 * identity));

    NormalStream stream(mix_seed(seed, 0x554e42ULL));
    for (int k = 0; k < 3; ++k) {
        Eigen::MatrixXd a(d, d);
        Eigen::MatrixXd b(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                a(i, j) = stream.next();
                b(i, j) = stream.next();
            }
        }
        cases.emplace_back("random#" + std::to_string(k), std::make_pair(a, b));
    }

    const std::vector<double> scales{1.0, 10.0, 100.0, 1e4};
    std::vector<OracleReport> reports;
    for (const auto& [label, pair] : cases) {
        const std::vector<double> risks =
            check_unbounded_without_sum_constraint(pair.first, pair.second, scales);
        bool increasing = true;
        for (std::size_t i = 1; i < risks.size(); ++i) {
            increasing = increasing && risks[i] > risks[i - 1];
        }
        const double final_risk = risks.back();
        const double threshold = 1e6;
        const double shortfall = increasing
                                     ? std::max(0.0, threshold - final_risk)
                                     : std::numeric_limits<double>::infinity();
        reports.push_back(make_report("unbounded_growth(" + label + ",t=1e4)", threshold,
                                      final_risk, shortfall, 0.0));
    }
    return reports;
}

}  // namespace

std::vector<OracleReport> run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "scalar") return scalar_suite(seed);
    if (name == "matrix") return matrix_suite(seed);
    if (name == "adversary") return adversary_suite(seed);
    if (name == "unbounded") return unbounded_suite(seed);
    if (name == "all") {
        std::vector<OracleReport> reports = scalar_suite(seed);
        for (auto batch : {matrix_suite(seed), adversary_suite(seed), unbounded_suite(seed)}) {
            reports.insert(reports.end(), std::make_move_iterator(batch.begin()),
                           std::make_move_iterator(batch.end()));
        }
        return reports;
    }
    throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace auxmean
