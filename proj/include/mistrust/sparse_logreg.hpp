#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mistrust/chart_features.hpp"
#include "mistrust/noncompliance.hpp"
#include "mistrust/stats.hpp"

namespace mistrust {

struct MistrustModel {
    std::vector<std::string> feature_names;
    std::vector<double> weights;
    double intercept = 0.0;
    double inverse_regularization = 1.0;  // C
    int iterations = 0;
    double final_objective = 0.0;
    bool converged = false;
};

struct MistrustScore {
    std::string admission_id;
    double score = 0.0;  // predicted probability in [0,1]
    friend bool operator==(const MistrustScore&, const MistrustScore&) = default;
};

struct FitOptions {
    double C = 1.0;        // inverse regularization strength
    double tol = 1e-7;     // relative objective change
    int max_iter = 5000;
    bool balance_classes = false;
    std::vector<double>* objective_trace = nullptr;  // optional per-iteration record
};

namespace detail {

inline void check_shapes(std::span<const double> w, const FeatureMatrix& X,
                         std::span<const double> y01) {
    if (w.size() != X.n_features)
        throw InvalidArgument("weight vector length does not match feature count");
    if (y01.size() != X.n_rows())
        throw InvalidArgument("label vector length does not match row count");
}

inline std::vector<double> margins(std::span<const double> w, double b, const FeatureMatrix& X) {
    std::vector<double> z(X.n_rows(), b);
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        double dot = 0;
        for (std::uint32_t j : X.rows[i]) dot += w[j];
        z[i] += dot;
    }
    return z;
}

inline double smooth_loss_from_margins(std::span<const double> z, std::span<const double> y01,
                                       std::span<const double> sw) {
    double loss = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double term = softplus(z[i]) - y01[i] * z[i];
        loss += sw.empty() ? term : sw[i] * term;
    }
    return loss;
}

}  // namespace detail

// Log loss plus gradient of the smooth (unpenalized) part.
struct SmoothLossGrad {
    double loss = 0;
    std::vector<double> grad_w;
    double grad_b = 0;
};

inline SmoothLossGrad smooth_loss_grad(std::span<const double> w, double b, const FeatureMatrix& X,
                                       std::span<const double> y01,
                                       std::span<const double> sample_weight = {}) {
    detail::check_shapes(w, X, y01);
    SmoothLossGrad out;
    out.grad_w.assign(X.n_features, 0.0);
    const auto z = detail::margins(w, b, X);
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        const double s = sample_weight.empty() ? 1.0 : sample_weight[i];
        out.loss += s * (softplus(z[i]) - y01[i] * z[i]);
        const double r = s * (sigmoid(z[i]) - y01[i]);
        for (std::uint32_t j : X.rows[i]) out.grad_w[j] += r;
        out.grad_b += r;
    }
    return out;
}

// Full objective: sum_i log(1 + exp(-yt_i (w.x_i + b))) + (1/C) ||w||_1 with
// yt in {-1,+1} and an unpenalized intercept.
inline double objective(std::span<const double> w, double b, const FeatureMatrix& X,
                        std::span<const double> y01, double C,
                        std::span<const double> sample_weight = {}) {
    detail::check_shapes(w, X, y01);
    if (C <= 0) throw InvalidArgument("C must be positive");
    if (!std::isfinite(b)) throw InvalidArgument("objective: non-finite intercept");
    double l1 = 0;
    for (double v : w) {
        if (!std::isfinite(v)) throw InvalidArgument("objective: non-finite weight");
        l1 += std::abs(v);
    }
    const auto z = detail::margins(w, b, X);
    return detail::smooth_loss_from_margins(z, y01, sample_weight) + l1 / C;
}

inline std::vector<double> labels_to_vector(const LabelVector& labels, const FeatureMatrix& X) {
    std::vector<double> y;
    y.reserve(X.n_rows());
    for (const auto& id : X.row_ids) {
        auto it = labels.labels.find(id);
        if (it == labels.labels.end())
            throw InvalidArgument("no label for admission '" + id + "'");
        y.push_back(it->second ? 1.0 : 0.0);
    }
    return y;
}

// Smallest L1 penalty (1/C) at which the optimum has all-zero weights:
// the max-norm of the smooth gradient at w = 0, b = logit(positive rate).
inline double lambda_max(const FeatureMatrix& X, std::span<const double> y01,
                         std::span<const double> sample_weight = {}) {
    double sw_total = 0, sw_pos = 0;
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        const double s = sample_weight.empty() ? 1.0 : sample_weight[i];
        sw_total += s;
        sw_pos += s * y01[i];
    }
    if (sw_pos <= 0 || sw_pos >= sw_total)
        throw InvalidArgument("lambda_max requires both classes present");
    const double b = std::log(sw_pos / (sw_total - sw_pos));
    const std::vector<double> w0(X.n_features, 0.0);
    const auto lg = smooth_loss_grad(w0, b, X, y01, sample_weight);
    double norm = 0;
    for (double g : lg.grad_w) norm = std::max(norm, std::abs(g));
    return norm;
}

// Proximal-gradient (ISTA) fit with soft-thresholding and backtracking line
// search. The total objective is non-increasing across iterations and the run
// is deterministic for identical inputs.
inline MistrustModel fit(const FeatureMatrix& X, std::span<const double> y01,
                         const FeatureVocabulary& vocab, const FitOptions& opts = {}) {
    if (opts.C <= 0) throw InvalidArgument("C must be positive");
    if (opts.tol <= 0) throw InvalidArgument("tol must be positive");
    if (opts.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (y01.size() != X.n_rows())
        throw InvalidArgument("label vector length does not match row count");
    if (vocab.size() != X.n_features)
        throw InvalidArgument("vocabulary size does not match feature count");

    std::size_t n_pos = 0;
    for (double y : y01) n_pos += y > 0.5 ? 1 : 0;
    const std::size_t n = y01.size();
    if (n_pos == 0 || n_pos == n)
        throw InvalidArgument("fit requires at least one positive and one negative label");

    std::vector<double> sw;
    if (opts.balance_classes) {
        const double wp = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
        const double wn = static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
        sw.reserve(n);
        for (double y : y01) sw.push_back(y > 0.5 ? wp : wn);
    }

    const double lambda = 1.0 / opts.C;
    const std::size_t d = X.n_features;

    // Start at the intercept-only optimum: w = 0, b = logit(positive rate).
    double sw_total = 0, sw_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sw.empty() ? 1.0 : sw[i];
        sw_total += s;
        sw_pos += s * y01[i];
    }
    std::vector<double> w(d, 0.0);
    double b = std::log(sw_pos / (sw_total - sw_pos));

    std::vector<double> z = detail::margins(w, b, X);
    double g = detail::smooth_loss_from_margins(z, y01, sw);
    double objective_value = g;  // ||w||_1 = 0

    MistrustModel model;
    model.feature_names = vocab.names;
    model.inverse_regularization = opts.C;
    if (opts.objective_trace) opts.objective_trace->push_back(objective_value);

    double step = 1.0;
    std::vector<double> grad_w(d), w_new(d), z_new;
    int iter = 0;
    for (iter = 1; iter <= opts.max_iter; ++iter) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = sw.empty() ? 1.0 : sw[i];
            const double r = s * (sigmoid(z[i]) - y01[i]);
            for (std::uint32_t j : X.rows[i]) grad_w[j] += r;
            grad_b += r;
        }

        step = std::min(step * 1.25, 1e6);
        double g_new = 0, b_new = 0, objective_new = 0;
        bool accepted = false;
        while (step >= 1e-18) {
            double delta_sq = 0, lin = 0, l1 = 0;
            for (std::size_t j = 0; j < d; ++j) {
                const double raw = w[j] - step * grad_w[j];
                const double thresholded =
                    std::copysign(std::max(std::abs(raw) - step * lambda, 0.0), raw);
                w_new[j] = thresholded;
                l1 += std::abs(thresholded);
                const double dw = thresholded - w[j];
                delta_sq += dw * dw;
                lin += grad_w[j] * dw;
            }
            b_new = b - step * grad_b;
            const double db = b_new - b;
            delta_sq += db * db;
            lin += grad_b * db;

            z_new = detail::margins(w_new, b_new, X);
            g_new = detail::smooth_loss_from_margins(z_new, y01, sw);
            objective_new = g_new + lambda * l1;
            const double bound = g + lin + delta_sq / (2.0 * step);
            const bool sufficient = g_new <= bound + 1e-12 * std::max(1.0, std::abs(g));
            if (sufficient && objective_new <= objective_value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {  // no representable step improves the objective
            model.converged = true;
            break;
        }

        w.swap(w_new);
        b = b_new;
        z.swap(z_new);
        g = g_new;
        if (opts.objective_trace) opts.objective_trace->push_back(objective_new);

        if (std::abs(objective_value - objective_new) <=
            opts.tol * std::max(1.0, std::abs(objective_value))) {
            objective_value = objective_new;
            model.converged = true;
            break;
        }
        objective_value = objective_new;
    }

    model.weights = std::move(w);
    model.intercept = b;
    model.iterations = std::min(iter, opts.max_iter);
    model.final_objective = objective_value;
    return model;
}

inline MistrustModel fit(const FeatureMatrix& X, const LabelVector& labels,
                         const FeatureVocabulary& vocab, const FitOptions& opts = {}) {
    return fit(X, labels_to_vector(labels, X), vocab, opts);
}

// ---------------------------------------------------------------------------
// prediction
// ---------------------------------------------------------------------------

namespace detail {

// Keeps predicted probabilities strictly inside (0,1) even where the logistic
// function saturates in double precision.
inline double open_unit_interval(double p) {
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0 - 1e-16);
}

}  // namespace detail

inline double predict_proba(const MistrustModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw InvalidArgument("predict_proba: feature vector length mismatch");
    double z = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) z += model.weights[j] * x[j];
    return detail::open_unit_interval(sigmoid(z));
}

inline double predict_proba_active(const MistrustModel& model,
                                   std::span<const std::uint32_t> active) {
    double z = model.intercept;
    for (std::uint32_t j : active) {
        if (j >= model.weights.size())
            throw InvalidArgument("predict_proba: active feature index out of range");
        z += model.weights[j];
    }
    return detail::open_unit_interval(sigmoid(z));
}

inline std::vector<MistrustScore> score_matrix(const MistrustModel& model,
                                               const FeatureMatrix& X) {
    if (X.n_features != model.weights.size())
        throw InvalidArgument("score_matrix: matrix width does not match model");
    std::vector<MistrustScore> out;
    out.reserve(X.n_rows());
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        out.push_back({X.row_ids[i], predict_proba_active(model, X.rows[i])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// weight report
// ---------------------------------------------------------------------------

struct TopFeatures {
    std::vector<std::pair<std::string, double>> positive;  // largest weights first
    std::vector<std::pair<std::string, double>> negative;  // most negative first
};

inline TopFeatures top_features(const MistrustModel& model, std::size_t k) {
    if (k < 1) throw InvalidArgument("top_features: k must be at least 1");
    std::vector<std::size_t> idx(model.weights.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    auto by_weight_desc = [&](std::size_t a, std::size_t b) {
        if (model.weights[a] != model.weights[b]) return model.weights[a] > model.weights[b];
        return model.feature_names[a] < model.feature_names[b];
    };
    auto by_weight_asc = [&](std::size_t a, std::size_t b) {
        if (model.weights[a] != model.weights[b]) return model.weights[a] < model.weights[b];
        return model.feature_names[a] < model.feature_names[b];
    };

    TopFeatures out;
    const std::size_t take = std::min(k, idx.size());
    std::vector<std::size_t> order = idx;
    std::sort(order.begin(), order.end(), by_weight_desc);
    for (std::size_t i = 0; i < take; ++i)
        out.positive.emplace_back(model.feature_names[order[i]], model.weights[order[i]]);
    std::sort(order.begin(), order.end(), by_weight_asc);
    for (std::size_t i = 0; i < take; ++i)
        out.negative.emplace_back(model.feature_names[order[i]], model.weights[order[i]]);
    return out;
}

inline void write_scores_csv(std::span<const MistrustScore> scores, std::ostream& out) {
    write_csv_row(out, {"admission_id", "score"});
    for (const auto& s : scores) write_csv_row(out, {s.admission_id, format_double(s.score)});
}

inline std::vector<MistrustScore> read_scores_csv(std::istream& in,
                                                  const std::string& file = "scores") {
    CsvReader reader(in, file);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError(file + ": empty scores file");
    HeaderIndex header(row, file);
    const std::size_t c_id = header.require("admission_id");
    const std::size_t c_score = header.require("score");
    std::vector<MistrustScore> out;
    while (reader.next(row)) {
        if (row.size() <= std::max(c_id, c_score))
            throw SchemaError(file + ": malformed score row at line " +
                              std::to_string(reader.record_line()));
        auto value = detail::parse_double(row[c_score]);
        if (!value)
            throw SchemaError(file + ": unparseable score at line " +
                              std::to_string(reader.record_line()));
        out.push_back({std::string(trim(row[c_id])), *value});
    }
    return out;
}

// ---------------------------------------------------------------------------
// serialization: feature_name,weight with reserved metadata rows first
// ---------------------------------------------------------------------------

inline void write_model_csv(const MistrustModel& model, std::ostream& out) {
    write_csv_row(out, {"feature_name", "weight"});
    write_csv_row(out, {"__intercept__", format_double(model.intercept)});
    write_csv_row(out, {"__inverse_regularization__", format_double(model.inverse_regularization)});
    write_csv_row(out, {"__iterations__", std::to_string(model.iterations)});
    write_csv_row(out, {"__converged__", model.converged ? "1" : "0"});
    write_csv_row(out, {"__final_objective__", format_double(model.final_objective)});
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        write_csv_row(out, {model.feature_names[j], format_double(model.weights[j])});
    }
}

inline MistrustModel read_model_csv(std::istream& in, const std::string& file = "model") {
    CsvReader reader(in, file);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError(file + ": empty model file");
    HeaderIndex header(row, file);
    const std::size_t c_name = header.require("feature_name");
    const std::size_t c_weight = header.require("weight");
    MistrustModel model;
    while (reader.next(row)) {
        if (row.size() <= std::max(c_name, c_weight))
            throw SchemaError(file + ": malformed model row");
        const std::string& name = row[c_name];
        auto value = detail::parse_double(row[c_weight]);
        if (!value) throw SchemaError(file + ": unparseable weight for '" + name + "'");
        if (name == "__intercept__") model.intercept = *value;
        else if (name == "__inverse_regularization__") model.inverse_regularization = *value;
        else if (name == "__iterations__") model.iterations = static_cast<int>(*value);
        else if (name == "__converged__") model.converged = *value != 0;
        else if (name == "__final_objective__") model.final_objective = *value;
        else {
            model.feature_names.push_back(name);
            model.weights.push_back(*value);
        }
    }
    return model;
}

}  // namespace mistrust
