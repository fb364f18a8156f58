#include "rdmpurify/rdm.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace rdmpurify {

namespace {

// Sign of mapping an ordered pair onto its sorted packed slot.
inline double pair_sign(int a, int b) { return a < b ? 1.0 : -1.0; }

} // namespace

TwoRDM::TwoRDM(int r, int N)
    : r_(r), n_(N), data_(Eigen::MatrixXd::Zero(pair_count(r), pair_count(r))) {}

TwoRDM::TwoRDM(int r, int N, Eigen::MatrixXd packed) : r_(r), n_(N), data_(std::move(packed)) {
    if (data_.rows() != pair_count(r) || data_.cols() != pair_count(r))
        throw std::invalid_argument("TwoRDM: packed matrix dimension mismatch");
}

TwoRDM TwoRDM::from_packed(int r, int N, const Eigen::MatrixXd& m) {
    if (m.rows() != pair_count(r) || m.cols() != pair_count(r))
        throw std::invalid_argument("TwoRDM::from_packed: dimension mismatch");
    TwoRDM d(r, N, ((m + m.transpose()) / 2.0).eval());
    d.asymmetry_ = ((m - m.transpose()) / 2.0).norm();
    return d;
}

double TwoRDM::element(int i, int j, int k, int l) const {
    if (i == j || k == l) return 0.0;
    double s = pair_sign(i, j) * pair_sign(k, l);
    if (i > j) std::swap(i, j);
    if (k > l) std::swap(k, l);
    return s * data_(pair_index(r_, i, j), pair_index(r_, k, l));
}

OneRDM contract_to_1rdm(const TwoRDM& d) {
    if (d.particles() < 2)
        throw std::invalid_argument("contract_to_1rdm: N >= 2 required");
    int r = d.r();
    OneRDM one{r, Eigen::MatrixXd::Zero(r, r)};
    for (int i = 0; i < r; ++i)
        for (int k = i; k < r; ++k) {
            double sum = 0.0;
            for (int j = 0; j < r; ++j) sum += d.element(i, j, k, j);
            sum /= d.particles() - 1;
            one.data(i, k) = sum;
            one.data(k, i) = sum;
        }
    return one;
}

TwoRDM map_Q(const TwoRDM& d) {
    if (d.particles() < 2) throw std::invalid_argument("map_Q: N >= 2 required");
    int r = d.r();
    OneRDM one = contract_to_1rdm(d);
    TwoRDM q(r, d.particles());
    auto& m = q.packed();
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            int row = pair_index(r, i, j);
            for (int k = 0; k < r; ++k)
                for (int l = k + 1; l < r; ++l) {
                    int col = pair_index(r, k, l);
                    if (col < row) continue;
                    double v = d.element(i, j, k, l);
                    if (i == k) v -= one.data(j, l);
                    if (j == l) v -= one.data(i, k);
                    if (i == l) v += one.data(j, k);
                    if (j == k) v += one.data(i, l);
                    if (i == k && j == l) v += 1.0;
                    if (i == l && j == k) v -= 1.0;
                    m(row, col) = v;
                    m(col, row) = v;
                }
        }
    return q;
}

GMatrix map_G(const TwoRDM& d) {
    int r = d.r();
    OneRDM one = contract_to_1rdm(d);
    GMatrix g(r, Eigen::MatrixXd::Zero(r * r, r * r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int row = ordered_index(r, i, j);
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < r; ++l) {
                    int col = ordered_index(r, k, l);
                    double v = -d.element(i, l, k, j);
                    if (j == l) v += one.data(i, k);
                    g.data(row, col) = v;
                }
        }
    return g;
}

SpectrumSummary min_eigenvalues(const Eigen::MatrixXd& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    SpectrumSummary s;
    s.dim = static_cast<int>(ev.size());
    s.min_eigenvalue = ev.minCoeff();
    s.max_eigenvalue = ev.maxCoeff();
    s.negative_count = static_cast<int>((ev.array() < -tol).count());
    return s;
}

SpectrumSummary min_eigenvalues(const TwoRDM& d, double tol) {
    return min_eigenvalues(d.packed(), tol);
}

SpectrumSummary min_eigenvalues(const GMatrix& g, double tol) {
    return min_eigenvalues(g.data, tol);
}

DeviationNorms deviation_norms(const TwoRDM& a, const TwoRDM& b) {
    if (a.r() != b.r())
        throw std::invalid_argument("deviation_norms: dimension mismatch");
    Eigen::MatrixXd diff = a.packed() - b.packed();
    DeviationNorms out;
    out.frobenius = 2.0 * diff.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    out.nuclear = 2.0 * es.eigenvalues().array().abs().sum();
    return out;
}

void save_rdm_json(const TwoRDM& d, std::ostream& out) {
    nlohmann::json j;
    j["r"] = d.r();
    j["N"] = d.particles();
    j["convention"] = "packed";
    std::vector<double> tri;
    int p = d.packed_dim();
    tri.reserve(static_cast<std::size_t>(p) * (p + 1) / 2);
    for (int row = 0; row < p; ++row)
        for (int col = 0; col <= row; ++col) tri.push_back(d.packed()(row, col));
    j["packed_lower_triangle"] = tri;
    out << j.dump(2) << "\n";
}

void save_rdm_json_file(const TwoRDM& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_rdm_json(d, out);
}

TwoRDM load_rdm_json(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    int r = j.at("r").get<int>();
    int n = j.at("N").get<int>();
    if (j.at("convention").get<std::string>() != "packed")
        throw std::runtime_error("2-RDM file: unsupported convention");
    auto tri = j.at("packed_lower_triangle").get<std::vector<double>>();
    int p = pair_count(r);
    if (tri.size() != static_cast<std::size_t>(p) * (p + 1) / 2)
        throw std::runtime_error("2-RDM file: triangle length mismatch");
    Eigen::MatrixXd m(p, p);
    std::size_t at = 0;
    for (int row = 0; row < p; ++row)
        for (int col = 0; col <= row; ++col) {
            m(row, col) = tri[at];
            m(col, row) = tri[at];
            ++at;
        }
    return TwoRDM(r, n, std::move(m));
}

TwoRDM load_rdm_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open 2-RDM file: " + path);
    return load_rdm_json(in);
}

} // namespace rdmpurify
