#include "qneuron/obsnet.hpp"

#include <string>

#include "qneuron/errors.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/observables.hpp"

namespace qneuron {

int observable_network::outputs() const {
    return layers.empty() ? static_cast<int>(base.size()) : static_cast<int>(layers.back().weights.rows());
}

void observable_network::validate() const {
    if (base.empty()) throw config_error("network: base must hold at least one observable");
    const Eigen::Index d = base.front().rows();
    for (const auto& b : base) {
        if (b.rows() != d || b.cols() != d) throw config_error("network: base observables differ in dimension");
        require_hermitian(b, "network base observable");
    }
    if (layers.empty()) throw config_error("network: layers must not be empty");
    if (depth() > max_network_depth) {
        throw config_error("network: depth " + std::to_string(depth()) + " exceeds the supported maximum of " +
                           std::to_string(max_network_depth));
    }
    Eigen::Index width = static_cast<Eigen::Index>(base.size());
    for (int l = 0; l < depth(); ++l) {
        const auto& W = layers[l].weights;
        if (W.rows() < 1 || W.cols() != width) {
            throw config_error("network: layers[" + std::to_string(l) + "].weights has shape " +
                               std::to_string(W.rows()) + "x" + std::to_string(W.cols()) + ", expected ?x" +
                               std::to_string(width));
        }
        if (!W.allFinite()) throw config_error("network: layers[" + std::to_string(l) + "].weights not finite");
        width = W.rows();
    }
}

namespace {

std::vector<cmat> combine(const Eigen::MatrixXd& W, const std::vector<cmat>& prev) {
    std::vector<cmat> out;
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
        cmat b = cmat::Zero(prev.front().rows(), prev.front().cols());
        for (Eigen::Index j = 0; j < W.cols(); ++j) b += W(i, j) * prev[j];
        out.push_back(b);
    }
    return out;
}

}  // namespace

network_cache forward_cached(const observable_network& net) {
    net.validate();
    network_cache c;
    c.A.push_back(net.base);
    for (const auto& layer : net.layers) {
        std::vector<cmat> pre = combine(layer.weights, c.A.back());
        std::vector<eigensystem> es;
        std::vector<cmat> act;
        for (const auto& b : pre) {
            es.push_back(eigh(b));
            const eigensystem& e = es.back();
            rvec f(e.dim());
            for (int k = 0; k < e.dim(); ++k) f(k) = layer.act.value(e.values(k));
            act.push_back(e.vectors * f.cast<cplx>().asDiagonal() * e.vectors.adjoint());
        }
        c.B.push_back(std::move(es));
        c.A.push_back(std::move(act));
    }
    return c;
}

rvec outputs_from_cache(const network_cache& cache, const cmat& rho) {
    const auto& top = cache.A.back();
    rvec out(top.size());
    for (std::size_t k = 0; k < top.size(); ++k) out(k) = expectation(top[k], rho);
    return out;
}

rvec forward(const observable_network& net, const cmat& rho) {
    net.validate();
    if (rho.rows() != net.base.front().rows()) throw config_error("network: state dimension mismatch");
    std::vector<cmat> cur = net.base;
    for (const auto& layer : net.layers) {
        std::vector<cmat> next;
        for (const auto& b : combine(layer.weights, cur)) {
            const activation& a = layer.act;
            next.push_back(matrix_function(eigh(b), [&a](double x) { return a.value(x); }));
        }
        cur = std::move(next);
    }
    rvec out(cur.size());
    for (std::size_t k = 0; k < cur.size(); ++k) out(k) = expectation(cur[k], rho);
    return out;
}

std::vector<Eigen::MatrixXd> network_gradient(const observable_network& net, const cmat& rho, int k) {
    network_cache cache = forward_cached(net);
    if (rho.rows() != net.base.front().rows()) throw config_error("network: state dimension mismatch");
    if (k < 0 || k >= net.outputs()) throw config_error("network: output index out of range");
    const int L = net.depth();
    const Eigen::Index d = rho.rows();
    std::vector<Eigen::MatrixXd> grads(L);
    std::vector<cmat> G(net.outputs(), cmat::Zero(d, d));
    G[k] = rho;
    for (int l = L - 1; l >= 0; --l) {
        const auto& layer = net.layers[l];
        const auto& prev = cache.A[l];
        std::vector<cmat> Ghat;
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            Ghat.push_back(frechet_apply(cache.B[l][i], layer.act, G[i]));
        }
        grads[l].resize(layer.weights.rows(), layer.weights.cols());
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) grads[l](i, j) = prev[j].cwiseProduct(Ghat[i].transpose()).sum().real();
        if (l > 0) {
            std::vector<cmat> next(layer.weights.cols(), cmat::Zero(d, d));
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j)
                for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) next[j] += layer.weights(i, j) * Ghat[i];
            G = std::move(next);
        }
    }
    return grads;
}

std::vector<Eigen::MatrixXd> network_fd_gradient(const observable_network& net, const cmat& rho, int k,
                                                 double h) {
    net.validate();
    if (k < 0 || k >= net.outputs()) throw config_error("network: output index out of range");
    std::vector<Eigen::MatrixXd> grads;
    observable_network work = net;
    for (int l = 0; l < net.depth(); ++l) {
        Eigen::MatrixXd g(net.layers[l].weights.rows(), net.layers[l].weights.cols());
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            for (Eigen::Index j = 0; j < g.cols(); ++j) {
                const double w = net.layers[l].weights(i, j);
                work.layers[l].weights(i, j) = w + h;
                double up = forward(work, rho)(k);
                work.layers[l].weights(i, j) = w - h;
                double down = forward(work, rho)(k);
                work.layers[l].weights(i, j) = w;
                g(i, j) = (up - down) / (2.0 * h);
            }
        }
        grads.push_back(g);
    }
    return grads;
}

observable_network network_from_json(const nlohmann::json& j) {
    observable_network net;
    if (!j.is_object()) throw config_error("network: expected a JSON object");
    for (const char* key : {"n", "base", "layers"})
        if (!j.contains(key)) throw config_error(std::string("network: missing key '") + key + "'");
    try {
        net.n = j.at("n").get<int>();
        if (net.n < 1 || net.n > 10) throw config_error("network: 'n' must be in [1,10]");
        for (const auto& s : j.at("base")) {
            pauli_string p = parse_pauli(s.get<std::string>());
            if (p.n() != net.n) throw config_error("network: base term '" + s.get<std::string>() + "' has wrong length");
            net.base.push_back(p.matrix());
            net.base_names.push_back(s.get<std::string>());
        }
        for (std::size_t l = 0; l < j.at("layers").size(); ++l) {
            const auto& lj = j.at("layers").at(l);
            const std::string where = "network: layers[" + std::to_string(l) + "]";
            if (!lj.contains("weights")) throw config_error(where + " missing key 'weights'");
            const auto& rows = lj.at("weights");
            network_layer layer;
            const std::size_t cols = rows.empty() ? 0 : rows.at(0).size();
            layer.weights.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows.at(r).size() != cols) throw config_error(where + ".weights is ragged");
                for (std::size_t c = 0; c < cols; ++c) layer.weights(r, c) = rows.at(r).at(c).get<double>();
            }
            layer.act = activation(parse_activation_kind(lj.value("activation", std::string("tanh"))),
                                   lj.value("T", 1.0));
            net.layers.push_back(layer);
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("network: ") + e.what());
    }
    net.validate();
    return net;
}

nlohmann::json to_json(const observable_network& net) {
    nlohmann::json j;
    j["n"] = net.n;
    j["base"] = net.base_names;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : net.layers) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row.push_back(layer.weights(r, c));
            rows.push_back(row);
        }
        layers.push_back({{"weights", rows}, {"activation", to_string(layer.act.kind)}, {"T", layer.act.T}});
    }
    j["layers"] = layers;
    return j;
}

}  // namespace qneuron
