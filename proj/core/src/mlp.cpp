#include "chaosnet/mlp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "chaosnet/seeding.hpp"

namespace chaosnet {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

/// Views of the flat parameter vector.
template <typename Scalar>
struct Layers {
    using Matrix = std::conditional_t<std::is_const_v<Scalar>, ConstMatrixMap, MatrixMap>;
    using Vector = std::conditional_t<std::is_const_v<Scalar>, ConstVectorMap, VectorMap>;

    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;

    Layers(const MlpDims& d, Scalar* p)
        : w1(p, static_cast<Eigen::Index>(d.hidden), static_cast<Eigen::Index>(d.inputs)),
          b1(p + d.hidden * d.inputs, static_cast<Eigen::Index>(d.hidden)),
          w2(p + d.hidden * d.inputs + d.hidden, static_cast<Eigen::Index>(d.outputs),
             static_cast<Eigen::Index>(d.hidden)),
          b2(p + d.hidden * d.inputs + d.hidden + d.outputs * d.hidden,
             static_cast<Eigen::Index>(d.outputs)) {}
};

void check_batch(const MlpDims& dims, std::span<const double> parameters, const TrainingSet& batch) {
    if (parameters.size() != dims.parameter_count()) {
        throw std::invalid_argument("mlp: parameter vector has wrong length");
    }
    if (batch.rows == 0) throw std::invalid_argument("mlp: empty batch");
    if (batch.inputs != dims.inputs || batch.outputs != dims.outputs) {
        throw std::invalid_argument("mlp: batch layout does not match network dimensions");
    }
}

RowMatrix sigmoid(const RowMatrix& z) {
    return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

}  // namespace

void TrainingSet::append(std::span<const double> in, std::span<const double> out) {
    if (in.size() != inputs || out.size() != outputs) {
        throw std::invalid_argument("TrainingSet::append: row layout mismatch");
    }
    x.insert(x.end(), in.begin(), in.end());
    y.insert(y.end(), out.begin(), out.end());
    ++rows;
}

MlpModel init_model(const MlpDims& dims, std::uint64_t seed) {
    if (dims.inputs == 0 || dims.hidden == 0 || dims.outputs == 0) {
        throw std::invalid_argument("init_model: dimensions must be positive");
    }
    MlpModel model;
    model.dims = dims;
    model.seed = seed;
    model.parameters.assign(dims.parameter_count(), 0.0);

    Rng rng(seed);
    Layers<double> layers(dims, model.parameters.data());
    std::uniform_real_distribution<double> hidden_dist(-1.0 / std::sqrt(double(dims.inputs)),
                                                       1.0 / std::sqrt(double(dims.inputs)));
    std::uniform_real_distribution<double> output_dist(-1.0 / std::sqrt(double(dims.hidden)),
                                                       1.0 / std::sqrt(double(dims.hidden)));
    for (Eigen::Index r = 0; r < layers.w1.rows(); ++r)
        for (Eigen::Index c = 0; c < layers.w1.cols(); ++c) layers.w1(r, c) = hidden_dist(rng);
    for (Eigen::Index r = 0; r < layers.w2.rows(); ++r)
        for (Eigen::Index c = 0; c < layers.w2.cols(); ++c) layers.w2(r, c) = output_dist(rng);
    return model;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> input) {
    const auto& d = model.dims;
    if (input.size() != d.inputs) {
        throw std::invalid_argument("forward: expected " + std::to_string(d.inputs) +
                                    " inputs, got " + std::to_string(input.size()));
    }
    if (model.parameters.size() != d.parameter_count()) {
        throw std::invalid_argument("forward: parameter vector has wrong length");
    }
    Layers<const double> layers(d, model.parameters.data());
    const ConstVectorMap in(input.data(), static_cast<Eigen::Index>(input.size()));
    const Eigen::VectorXd z = layers.w1 * in + layers.b1;
    const Eigen::VectorXd a = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    const Eigen::VectorXd out = layers.w2 * a + layers.b2;
    return {out.data(), out.data() + out.size()};
}

std::vector<double> MlpModel::predict(std::span<const double> raw) const {
    if (scaling.empty()) return forward(*this, raw);
    return forward(*this, scaling.apply(raw));
}

double loss_and_gradient(const MlpDims& dims, std::span<const double> parameters,
                         const TrainingSet& batch, std::span<double> gradient) {
    check_batch(dims, parameters, batch);
    if (gradient.size() != parameters.size()) {
        throw std::invalid_argument("loss_and_gradient: gradient buffer has wrong length");
    }
    const auto n = static_cast<Eigen::Index>(batch.rows);
    const ConstMatrixMap x(batch.x.data(), n, static_cast<Eigen::Index>(batch.inputs));
    const ConstMatrixMap y(batch.y.data(), n, static_cast<Eigen::Index>(batch.outputs));
    Layers<const double> p(dims, parameters.data());
    Layers<double> g(dims, gradient.data());

    const RowMatrix a = sigmoid((x * p.w1.transpose()).rowwise() + p.b1.transpose());
    RowMatrix residual = (a * p.w2.transpose()).rowwise() + p.b2.transpose();
    residual -= y;
    const double value = 0.5 * residual.squaredNorm() / static_cast<double>(n);

    residual /= static_cast<double>(n);  // d loss / d output
    g.w2.noalias() = residual.transpose() * a;
    g.b2 = residual.colwise().sum().transpose();
    const RowMatrix delta = ((residual * p.w2).array() * a.array() * (1.0 - a.array())).matrix();
    g.w1.noalias() = delta.transpose() * x;
    g.b1 = delta.colwise().sum().transpose();
    return value;
}

std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& model,
                                                         const TrainingSet& batch) {
    std::vector<double> gradient(model.parameters.size());
    const double value = loss_and_gradient(model.dims, model.parameters, batch, gradient);
    return {value, std::move(gradient)};
}

double loss(const MlpDims& dims, std::span<const double> parameters, const TrainingSet& batch) {
    check_batch(dims, parameters, batch);
    const auto n = static_cast<Eigen::Index>(batch.rows);
    const ConstMatrixMap x(batch.x.data(), n, static_cast<Eigen::Index>(batch.inputs));
    const ConstMatrixMap y(batch.y.data(), n, static_cast<Eigen::Index>(batch.outputs));
    Layers<const double> p(dims, parameters.data());
    const RowMatrix a = sigmoid((x * p.w1.transpose()).rowwise() + p.b1.transpose());
    const RowMatrix out = (a * p.w2.transpose()).rowwise() + p.b2.transpose();
    return 0.5 * (out - y).squaredNorm() / static_cast<double>(n);
}

MlpModel lbfgs_train(MlpModel model, const TrainingSet& train, const TrainingSet& validation,
                     const TrainConfig& cfg) {
    if (cfg.max_epochs < 1) throw std::invalid_argument("lbfgs_train: max_epochs must be >= 1");
    if (train.rows == 0 || validation.rows == 0) {
        throw std::invalid_argument("lbfgs_train: training and validation sets must be nonempty");
    }
    const MlpDims dims = model.dims;
    const Objective objective = [&](std::span<const double> params, std::span<double> grad) {
        return loss_and_gradient(dims, params, train, grad);
    };
    LbfgsOptions options;
    options.memory = cfg.memory;
    options.c1 = cfg.c1;
    options.c2 = cfg.c2;
    options.gradient_tolerance = cfg.gradient_tolerance;
    options.max_epochs = cfg.max_epochs;

    auto record = [&](const EpochInfo& info, std::span<const double> params) {
        model.history.push_back(
            {info.epoch, info.loss, loss(dims, params, validation), info.kind});
    };
    lbfgs_minimize(objective, model.parameters, options, record);

    for (double v : model.parameters) {
        if (!std::isfinite(v)) throw std::runtime_error("lbfgs_train: non-finite parameters");
    }
    return model;
}

// Model file

namespace {

constexpr std::string_view kModelMagic = "chaosnet-mlp";
constexpr int kModelVersion = 1;

void write_values(std::ostream& out, std::string_view key, std::span<const double> values) {
    out << key << ' ' << values.size();
    char buf[64];
    for (double v : values) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
}

std::vector<double> read_values(std::istream& in, std::string_view key) {
    std::string word;
    std::size_t count = 0;
    if (!(in >> word >> count) || word != key) {
        throw std::invalid_argument("model file: expected '" + std::string(key) + "'");
    }
    std::vector<double> values(count);
    for (auto& v : values) {
        if (!(in >> word)) throw std::invalid_argument("model file: truncated '" + std::string(key) + "'");
        const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
        if (ec != std::errc{} || ptr != word.data() + word.size()) {
            throw std::invalid_argument("model file: bad number '" + word + "'");
        }
    }
    return values;
}

}  // namespace

void write_model(std::ostream& out, const MlpModel& model) {
    out << kModelMagic << ' ' << kModelVersion << '\n';
    out << "dims " << model.dims.inputs << ' ' << model.dims.hidden << ' ' << model.dims.outputs
        << '\n';
    out << "seed " << model.seed << '\n';
    write_values(out, "scaling_min", model.scaling.min);
    write_values(out, "scaling_max", model.scaling.max);
    write_values(out, "parameters", model.parameters);
}

MlpModel read_model(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kModelMagic) {
        throw std::invalid_argument("model file: missing header");
    }
    if (version != kModelVersion) {
        throw std::invalid_argument("model file: unsupported version " + std::to_string(version));
    }
    MlpModel model;
    std::string key;
    if (!(in >> key >> model.dims.inputs >> model.dims.hidden >> model.dims.outputs) ||
        key != "dims") {
        throw std::invalid_argument("model file: bad dims line");
    }
    if (!(in >> key >> model.seed) || key != "seed") {
        throw std::invalid_argument("model file: bad seed line");
    }
    model.scaling.min = read_values(in, "scaling_min");
    model.scaling.max = read_values(in, "scaling_max");
    model.parameters = read_values(in, "parameters");
    if (model.parameters.size() != model.dims.parameter_count()) {
        throw std::invalid_argument("model file: parameter count does not match dims");
    }
    if (model.scaling.min.size() != model.scaling.max.size() ||
        (!model.scaling.empty() && model.scaling.min.size() != model.dims.inputs)) {
        throw std::invalid_argument("model file: scaling does not match input count");
    }
    return model;
}

void save_model(const std::filesystem::path& path, const MlpModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file " + path.string());
    write_model(out, model);
}

MlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    return read_model(in);
}

void write_training_log(std::ostream& out, const MlpModel& model) {
    out << "epoch,train_loss,val_loss,step_kind\n";
    char buf[64];
    auto num = [&](double v) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    };
    for (const auto& r : model.history) {
        out << r.epoch << ',' << num(r.train_loss);
        out << ',' << num(r.validation_loss) << ',' << step_kind_name(r.step_kind) << '\n';
    }
}

}  // namespace chaosnet
