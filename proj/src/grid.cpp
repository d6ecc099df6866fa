#include "ising/grid.hpp"

#include <cmath>
#include <limits>

#include "ising/error.hpp"

namespace ising {

Graph grid_graph(int h) {
    if (h < 1) throw Error(ErrorCode::InvalidInput, "grid side must be positive");
    Graph g(h * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            if (j + 1 < h) g.add_edge(i * h + j, i * h + j + 1);
            if (i + 1 < h) g.add_edge(i * h + j, (i + 1) * h + j);
        }
    return g;
}

GridModel::GridModel(int side, std::vector<double> mu, std::vector<double> j)
    : h(side), fields(std::move(mu)), interactions(std::move(j)) {
    if (h < 1) throw Error(ErrorCode::InvalidInput, "grid side must be positive");
    if (static_cast<int>(fields.size()) != h * h)
        throw Error(ErrorCode::InvalidInput, "grid field vector has the wrong size");
    if (static_cast<int>(interactions.size()) != 2 * h * (h - 1))
        throw Error(ErrorCode::InvalidInput, "grid interaction vector has the wrong size");
}

IsingModel GridModel::ising_model() const { return IsingModel(graph(), interactions, fields); }

GridModel random_grid_model(int h, double alpha, Rng& rng) {
    std::vector<double> mu(h * h), j(2 * h * (h - 1));
    for (double& x : mu) x = rng.uniform(-0.5, 0.5);
    for (double& x : j) x = rng.uniform(-alpha, alpha);
    return GridModel(h, std::move(mu), std::move(j));
}

ApexModel apexify(const GridModel& m) {
    ApexModel out;
    out.graph = m.graph();
    out.grid_edge_count = out.graph.edge_count();
    out.apex = out.graph.add_vertex();
    out.interactions = m.interactions;
    for (int v = 0; v < m.h * m.h; ++v) {
        out.graph.add_edge(v, out.apex);
        out.interactions.push_back(m.fields[v]);
    }
    return out;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double lse(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

inline int spin_of(std::size_t state, int bit) { return (state >> bit) & 1 ? -1 : 1; }

class TransferMatrix {
public:
    explicit TransferMatrix(const GridModel& m) : m_(m), h_(m.h), states_(std::size_t{1} << m.h) {
        right_.assign(h_ * h_, -1);
        down_.assign(h_ * h_, -1);
        int e = 0;
        for (int i = 0; i < h_; ++i)
            for (int j = 0; j < h_; ++j) {
                if (j + 1 < h_) right_[i * h_ + j] = e++;
                if (i + 1 < h_) down_[i * h_ + j] = e++;
            }
    }

    double log_weight(int i, int j, std::size_t state, int s) const {
        double w = m_.fields[i * h_ + j] * s;
        if (j > 0) w += m_.interactions[right_[i * h_ + j - 1]] * s * spin_of(state, j - 1);
        if (i > 0) w += m_.interactions[down_[(i - 1) * h_ + j]] * s * spin_of(state, j);
        return w;
    }

    std::vector<double> forward(int i, int j, const std::vector<double>& alpha) const {
        std::vector<double> out(states_);
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t next = 0; next < states_; ++next) {
            const int s = spin_of(next, j);
            const std::size_t p0 = next & ~bit, p1 = next | bit;
            double acc = kNegInf;
            if (alpha[p0] != kNegInf) acc = alpha[p0] + log_weight(i, j, p0, s);
            if (i > 0 && alpha[p1] != kNegInf) acc = lse(acc, alpha[p1] + log_weight(i, j, p1, s));
            out[next] = acc;
        }
        return out;
    }

    std::vector<double> backward(int i, int j, const std::vector<double>& beta) const {
        std::vector<double> out(states_);
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t prev = 0; prev < states_; ++prev) {
            const double up = log_weight(i, j, prev, 1) + beta[prev & ~bit];
            const double down = log_weight(i, j, prev, -1) + beta[prev | bit];
            out[prev] = lse(up, down);
        }
        return out;
    }

    std::vector<double> initial() const {
        std::vector<double> a(states_, kNegInf);
        a[0] = 0.0;
        return a;
    }

    GridExact run(bool with_marginals) const {
        GridExact out;
        std::vector<std::vector<double>> checkpoints;
        std::vector<double> alpha = initial();
        for (int i = 0; i < h_; ++i) {
            if (with_marginals) checkpoints.push_back(alpha);
            for (int j = 0; j < h_; ++j) alpha = forward(i, j, alpha);
        }
        double log_z = kNegInf;
        for (double a : alpha) log_z = lse(log_z, a);
        out.log_z = log_z;
        if (!with_marginals) return out;

        out.edge_expectations.assign(2 * h_ * (h_ - 1), 0.0);
        out.vertex_expectations.assign(h_ * h_, 0.0);
        std::vector<double> beta(states_, 0.0);
        for (int i = h_ - 1; i >= 0; --i) {
            std::vector<std::vector<double>> row{checkpoints[i]};
            for (int j = 0; j + 1 < h_; ++j) row.push_back(forward(i, j, row.back()));
            for (int j = h_ - 1; j >= 0; --j) {
                accumulate(i, j, row[j], beta, log_z, out);
                beta = backward(i, j, beta);
            }
        }
        return out;
    }

private:
    void accumulate(int i, int j, const std::vector<double>& alpha, const std::vector<double>& beta, double log_z,
                    GridExact& out) const {
        const std::size_t bit = std::size_t{1} << j;
        double ev = 0.0, eleft = 0.0, eup = 0.0;
        for (std::size_t prev = 0; prev < states_; ++prev) {
            if (alpha[prev] == kNegInf) continue;
            for (int s : {1, -1}) {
                const std::size_t next = s > 0 ? prev & ~bit : prev | bit;
                const double p = std::exp(alpha[prev] + log_weight(i, j, prev, s) + beta[next] - log_z);
                ev += p * s;
                if (j > 0) eleft += p * s * spin_of(prev, j - 1);
                if (i > 0) eup += p * s * spin_of(prev, j);
            }
        }
        out.vertex_expectations[i * h_ + j] = ev;
        if (j > 0) out.edge_expectations[right_[i * h_ + j - 1]] = eleft;
        if (i > 0) out.edge_expectations[down_[(i - 1) * h_ + j]] = eup;
    }

    const GridModel& m_;
    int h_;
    std::size_t states_;
    std::vector<int> right_, down_;
};

}  // namespace

GridExact transfer_matrix_exact(const GridModel& m, bool with_marginals) {
    if (m.h > kTransferMatrixLimit)
        throw Error(ErrorCode::TooLarge, "transfer matrix supports H <= " + std::to_string(kTransferMatrixLimit));
    return TransferMatrix(m).run(with_marginals);
}

}  // namespace ising
