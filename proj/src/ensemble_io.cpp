#include "ppcov/csv.hpp"
#include "ppcov/errors.hpp"
#include "ppcov/ppp.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <string>

namespace ppcov {

using nlohmann::json;

void write_ensemble_csv(const std::filesystem::path& path, const std::vector<CovMatrix>& draws) {
    csv::Writer w(path);
    w.row({"draw_index", "i", "j", "value"});
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const CovMatrix& m = draws[k];
        for (std::size_t i = 0; i < m.dim(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                w.row({std::to_string(k), std::to_string(i), std::to_string(j), csv::format_double(m(i, j))});
            }
        }
    }
    w.close();
}

namespace {

std::size_t parse_index(const std::string& field, std::size_t line, const char* column) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(field, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != field.size()) {
        throw InputError("ensemble CSV line " + std::to_string(line) + ": bad " + column + " '" + field + "'");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<CovMatrix> read_ensemble_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty() || rows.front() != std::vector<std::string>{"draw_index", "i", "j", "value"}) {
        throw InputError("'" + path.string() + "' lacks the header draw_index,i,j,value");
    }
    // draw -> list of (i, j, value); dimension inferred from the largest index.
    std::map<std::size_t, std::vector<std::tuple<std::size_t, std::size_t, double>>> entries;
    std::size_t p = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() != 4) throw InputError("ensemble CSV line " + std::to_string(r + 1) + ": expected 4 fields");
        const std::size_t k = parse_index(f[0], r + 1, "draw_index");
        const std::size_t i = parse_index(f[1], r + 1, "i");
        const std::size_t j = parse_index(f[2], r + 1, "j");
        double v = 0.0;
        if (!csv::try_parse_double(f[3], v)) {
            throw InputError("ensemble CSV line " + std::to_string(r + 1) + ": bad value '" + f[3] + "'");
        }
        if (j > i) throw InputError("ensemble CSV line " + std::to_string(r + 1) + ": expected lower triangle (i >= j)");
        p = std::max(p, i + 1);
        entries[k].emplace_back(i, j, v);
    }
    if (entries.empty()) throw InputError("'" + path.string() + "' contains no draws");

    std::vector<CovMatrix> draws;
    std::size_t expected = 0;
    for (const auto& [k, list] : entries) {
        if (k != expected++) throw InputError("ensemble CSV draw indices are not contiguous from 0");
        if (list.size() != p * (p + 1) / 2) {
            throw InputError("ensemble CSV draw " + std::to_string(k) + " does not cover the lower triangle");
        }
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
        for (const auto& [i, j, v] : list) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        draws.emplace_back(m, CovMatrix::Triangle::lower);
    }
    return draws;
}

void write_ensemble_metadata(const std::filesystem::path& path, const PosteriorEnsemble& e) {
    const auto& prior = e.prior();
    json scale = json::array();
    for (std::size_t i = 0; i < prior.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j <= i; ++j) row.push_back(prior.scale()(i, j));
        scale.push_back(std::move(row));
    }
    const auto& c = e.config();
    json meta = {
        {"rng", std::string(rng_family)},
        {"seed", e.seed()},
        {"draws", e.size()},
        {"dim", e.dim()},
        {"post_processed", e.post_processed()},
        {"threshold",
         {{"gamma", c.gamma}, {"epsilon", c.epsilon}, {"n", c.n}, {"p", c.p}, {"preserve_diagonal", c.preserve_diagonal}}},
        {"prior", {{"nu", prior.nu()}, {"scale_lower", std::move(scale)}}},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed on '" + path.string() + "'");
}

PosteriorEnsemble read_ensemble(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
    std::ifstream in(meta_path);
    if (!in) throw InputError("cannot open ensemble metadata '" + meta_path.string() + "'");
    json meta;
    try {
        meta = json::parse(in);
        ThresholdConfig cfg;
        const auto& t = meta.at("threshold");
        cfg.gamma = t.at("gamma").get<double>();
        cfg.epsilon = t.at("epsilon").get<double>();
        cfg.n = t.at("n").get<std::size_t>();
        cfg.p = t.at("p").get<std::size_t>();
        cfg.preserve_diagonal = t.at("preserve_diagonal").get<bool>();
        cfg.validate();

        const auto& rows = meta.at("prior").at("scale_lower");
        const auto p = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(p, p);
        for (Eigen::Index i = 0; i < p; ++i) {
            const auto& row = rows.at(static_cast<std::size_t>(i));
            if (static_cast<Eigen::Index>(row.size()) != i + 1) throw InputError("prior scale_lower is not triangular");
            for (Eigen::Index j = 0; j <= i; ++j) scale(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
        IWParams prior(CovMatrix(scale, CovMatrix::Triangle::lower), meta.at("prior").at("nu").get<double>());

        auto draws = read_ensemble_csv(csv_path);
        if (draws.size() != meta.at("draws").get<std::size_t>()) {
            throw InputError("ensemble metadata draw count does not match the CSV");
        }
        const bool post = meta.at("post_processed").get<bool>();
        if (post) {
            for (std::size_t k = 0; k < draws.size(); ++k) {
                if (sym_eigen_extremes(draws[k]).min_eig < cfg.epsilon - 1e-10) {
                    throw InputError("draw " + std::to_string(k) + " violates the positive-definite floor");
                }
            }
        }
        return PosteriorEnsemble(std::move(draws), cfg, std::move(prior), meta.at("seed").get<std::uint64_t>(), post);
    } catch (const json::exception& ex) {
        throw InputError("malformed ensemble metadata '" + meta_path.string() + "': " + ex.what());
    }
}

}  // namespace ppcov
