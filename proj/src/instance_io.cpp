#include "polysub/instance_io.hpp"

#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

namespace polysub {

namespace {

using nlohmann::json;

std::vector<double> flatten(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

Eigen::MatrixXd unflatten(const std::vector<double>& v, int rows, int cols,
                          const char* what) {
    if (static_cast<int>(v.size()) != rows * cols)
        throw FileFormatError(std::string("instance file: bad shape for ") + what);
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = v[k++];
    return m;
}

}  // namespace

void write_instance(const std::string& path, const ProblemInstance& instance) {
    json doc;
    doc["version"] = 1;
    doc["D"] = instance.D;
    doc["d"] = instance.d;
    doc["m"] = instance.m;
    doc["sigma"] = instance.sigma;
    doc["seed"] = instance.seed;
    json covs = json::array();
    for (const auto& c : instance.covariances) covs.push_back(flatten(c));
    doc["covariances"] = std::move(covs);
    json means = json::array();
    for (const auto& mu : instance.means) means.push_back(flatten(mu));
    doc["means"] = std::move(means);
    if (instance.true_basis.size() > 0) doc["true_basis"] = flatten(instance.true_basis);

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

ProblemInstance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw FileFormatError(std::string("instance file: invalid JSON: ") + e.what());
    }

    try {
        if (!doc.contains("version") || doc["version"].get<int>() != 1)
            throw FileFormatError("instance file: missing or unsupported version");
        ProblemInstance inst;
        inst.D = doc.at("D").get<int>();
        inst.d = doc.at("d").get<int>();
        inst.m = doc.at("m").get<int>();
        inst.sigma = doc.at("sigma").get<double>();
        inst.seed = doc.at("seed").get<std::uint64_t>();
        if (inst.D < 1 || inst.m < 1 || inst.d < 0 || inst.d > inst.D)
            throw FileFormatError("instance file: inconsistent dimensions");

        const auto covs = doc.at("covariances").get<std::vector<std::vector<double>>>();
        const auto means = doc.at("means").get<std::vector<std::vector<double>>>();
        if (static_cast<int>(covs.size()) != inst.m ||
            static_cast<int>(means.size()) != inst.m)
            throw FileFormatError("instance file: epoch count mismatch");
        for (int i = 0; i < inst.m; ++i) {
            inst.covariances.push_back(
                unflatten(covs[static_cast<std::size_t>(i)], inst.D, inst.D, "covariance"));
            inst.means.push_back(
                unflatten(means[static_cast<std::size_t>(i)], inst.D, 1, "mean"));
        }
        if (doc.contains("true_basis"))
            inst.true_basis = unflatten(doc["true_basis"].get<std::vector<double>>(),
                                        inst.D, inst.d, "true_basis");
        return inst;
    } catch (const json::exception& e) {
        throw FileFormatError(std::string("instance file: ") + e.what());
    }
}

std::vector<Eigen::MatrixXd> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw FileFormatError("samples file: empty");
    if (line.rfind("epoch,", 0) != 0)
        throw FileFormatError("samples file: header must start with 'epoch,'");
    const auto dims = static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (dims < 1) throw FileFormatError("samples file: no data columns");

    std::map<long, std::vector<Eigen::VectorXd>> by_epoch;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        if (!std::getline(row, field, ','))
            throw FileFormatError("samples file: bad row at line " + std::to_string(line_no));
        long epoch = 0;
        try {
            epoch = std::stol(field);
        } catch (...) {
            throw FileFormatError("samples file: bad epoch label at line " +
                                  std::to_string(line_no));
        }
        if (epoch < 1)
            throw FileFormatError("samples file: epoch labels are 1-based (line " +
                                  std::to_string(line_no) + ")");
        Eigen::VectorXd x(dims);
        for (int k = 0; k < dims; ++k) {
            if (!std::getline(row, field, ','))
                throw FileFormatError("samples file: short row at line " +
                                      std::to_string(line_no));
            try {
                x[k] = std::stod(field);
            } catch (...) {
                throw FileFormatError("samples file: bad number at line " +
                                      std::to_string(line_no));
            }
        }
        if (std::getline(row, field, ','))
            throw FileFormatError("samples file: extra columns at line " +
                                  std::to_string(line_no));
        by_epoch[epoch].push_back(std::move(x));
    }
    if (by_epoch.empty()) throw FileFormatError("samples file: no samples");

    std::vector<Eigen::MatrixXd> out;
    for (const auto& [label, rows] : by_epoch) {
        if (rows.size() < 2)
            throw FileFormatError("samples file: epoch " + std::to_string(label) +
                                  " has fewer than two samples");
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dims);
        for (std::size_t i = 0; i < rows.size(); ++i)
            m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace polysub
