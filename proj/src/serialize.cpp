#include "arc/serialize.hpp"

#include <algorithm>
#include <fstream>

namespace arc {

Json activation_to_json(const ActivationSpec& act) {
    switch (act.kind) {
        case Activation::ReLU: return Json{{"kind", "relu"}};
        case Activation::Identity: return Json{{"kind", "identity"}};
        case Activation::LeakyReLU: return Json{{"kind", "leaky_relu"}, {"slope", act.slope}};
    }
    throw InvalidInput("activation: unknown kind");
}

ActivationSpec activation_from_json(const Json& doc) {
    reject_unknown_keys(doc, {"kind", "slope"}, "activation");
    std::string kind = doc.at("kind").get<std::string>();
    if (kind == "relu") return ActivationSpec::relu();
    if (kind == "identity") return ActivationSpec::identity();
    if (kind == "leaky_relu") return ActivationSpec::leaky_relu(doc.at("slope").get<double>());
    throw InvalidInput("activation: unknown kind '" + kind + "'");
}

Json mlp_to_json(const MLP& net, const std::string& seed_provenance) {
    net.validate();
    Json doc;
    doc["dims"] = net.dims();
    doc["activation"] = activation_to_json(net.activation);
    Json layers = Json::array();
    for (const Matrix& w : net.weights) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < w.rows; ++i) rows.push_back(w.row(i));
        layers.push_back(rows);
    }
    doc["weights"] = layers;
    doc["seed_provenance"] = seed_provenance;
    return doc;
}

MLP mlp_from_json(const Json& doc) {
    reject_unknown_keys(doc, {"dims", "activation", "weights", "seed_provenance"}, "model");
    MLP net;
    net.activation = activation_from_json(doc.at("activation"));
    auto dims = doc.at("dims").get<std::vector<std::size_t>>();
    require(dims.size() >= 2, "model: dims must list h_0..h_l");
    const Json& layers = doc.at("weights");
    require(layers.is_array() && layers.size() + 1 == dims.size(),
            "model: weights do not match dims");
    for (std::size_t j = 0; j < layers.size(); ++j) {
        Matrix w(dims[j + 1], dims[j]);
        const Json& rows = layers[j];
        require(rows.is_array() && rows.size() == w.rows, "model: bad row count in layer");
        for (std::size_t i = 0; i < w.rows; ++i) {
            auto row = rows[i].get<std::vector<double>>();
            require(row.size() == w.cols, "model: bad column count in layer");
            for (std::size_t c = 0; c < w.cols; ++c) w.at(i, c) = row[c];
        }
        net.weights.push_back(std::move(w));
    }
    net.validate();
    return net;
}

void write_mlp_json(const MLP& net, const std::string& path, const std::string& seed_provenance) {
    write_json_file(mlp_to_json(net, seed_provenance), path);
}

MLP read_mlp_json(const std::string& path) { return mlp_from_json(read_json_file(path)); }

Json class_spec_to_json(const FunctionClassSpec& cls) {
    return Json{{"dims", cls.dims},
                {"norm", norm_kind_name(cls.norm_kind)},
                {"budgets", cls.budgets},
                {"activation", activation_to_json(cls.activation)}};
}

FunctionClassSpec class_spec_from_json(const Json& doc) {
    reject_unknown_keys(doc, {"dims", "norm", "budgets", "activation"}, "class");
    FunctionClassSpec cls;
    cls.dims = doc.at("dims").get<std::vector<std::size_t>>();
    cls.budgets = doc.at("budgets").get<std::vector<double>>();
    std::string norm = doc.value("norm", std::string("frobenius"));
    if (norm == "frobenius") {
        cls.norm_kind = NormKind::Frobenius;
    } else if (norm == "one_inf") {
        cls.norm_kind = NormKind::GroupOneInf;
    } else {
        throw InvalidInput("class: norm must be 'frobenius' or 'one_inf'");
    }
    cls.activation = doc.contains("activation") ? activation_from_json(doc.at("activation"))
                                                : ActivationSpec::relu();
    cls.validate();
    return cls;
}

Json attack_spec_to_json(const AttackSpec& spec) {
    Json doc;
    doc["p"] = is_inf_exponent(spec.p) ? Json("inf") : Json(spec.p);
    doc["epsilon"] = spec.epsilon;
    doc["steps"] = spec.steps;
    doc["step_size"] = spec.step_size;
    doc["restarts"] = spec.restarts;
    doc["grid_resolution"] = spec.grid_resolution;
    switch (spec.solver) {
        case AttackSolver::ExactLinear: doc["solver"] = "exact_linear"; break;
        case AttackSolver::PGD: doc["solver"] = "pgd"; break;
        case AttackSolver::FGSM: doc["solver"] = "fgsm"; break;
        case AttackSolver::GridOracle: doc["solver"] = "grid"; break;
    }
    return doc;
}

AttackSpec attack_spec_from_json(const Json& doc) {
    reject_unknown_keys(
        doc, {"p", "epsilon", "steps", "step_size", "restarts", "grid_resolution", "solver"},
        "attack");
    AttackSpec spec;
    if (doc.contains("p")) {
        if (doc["p"].is_string()) {
            require(doc["p"].get<std::string>() == "inf", "attack: p must be a number or 'inf'");
            spec.p = kInf;
        } else {
            spec.p = doc["p"].get<double>();
        }
    }
    spec.epsilon = doc.value("epsilon", 0.0);
    spec.steps = doc.value("steps", 20);
    spec.step_size = doc.value("step_size", 0.0);
    spec.restarts = doc.value("restarts", 5);
    spec.grid_resolution = doc.value("grid_resolution", 101);
    std::string solver = doc.value("solver", std::string("pgd"));
    if (solver == "exact_linear") {
        spec.solver = AttackSolver::ExactLinear;
    } else if (solver == "pgd") {
        spec.solver = AttackSolver::PGD;
    } else if (solver == "fgsm") {
        spec.solver = AttackSolver::FGSM;
    } else if (solver == "grid") {
        spec.solver = AttackSolver::GridOracle;
    } else {
        throw InvalidInput("attack: unknown solver '" + solver + "'");
    }
    spec.validate();
    return spec;
}

Json bound_report_to_json(const BoundReport& report) {
    Json doc;
    doc["thm1_frobenius"] = report.thm1_frobenius;
    doc["thm2_one_inf"] = report.thm2_one_inf;
    doc["thm3_lower"] = report.thm3_lower;
    if (report.thm4_multiclass) doc["thm4_multiclass"] = *report.thm4_multiclass;
    for (const auto& [name, value] : report.comparisons) doc[name] = value;
    doc["c_std"] = report.c_std;
    doc["c_adv"] = report.c_adv;
    doc["w_factor"] = report.w_factor;
    doc["c_adv_degenerate"] = report.c_adv_degenerate;
    doc["n"] = report.n;
    return doc;
}

Json rad_estimate_to_json(const RadEstimate& est) {
    Json doc;
    doc["mean"] = est.mean;
    doc["stderr"] = est.stderr_;
    doc["draws"] = est.draws;
    doc["low_confidence"] = est.draws < 2;
    return doc;
}

Json gap_table_to_json(const GapTable& t) {
    return Json{{"gap_std_std", t.e_std_std},
                {"gap_std_rob", t.e_std_rob},
                {"gap_adv_std", t.e_adv_std},
                {"gap_adv_rob", t.e_adv_rob},
                {"train_err_std_std", t.train_std_std},
                {"train_err_std_rob", t.train_std_rob},
                {"train_err_adv_std", t.train_adv_std},
                {"train_err_adv_rob", t.train_adv_rob},
                {"test_err_std_std", t.test_std_std},
                {"test_err_std_rob", t.test_std_rob},
                {"test_err_adv_std", t.test_adv_std},
                {"test_err_adv_rob", t.test_adv_rob},
                {"degenerate_std_rob", t.degenerate_std_rob}};
}

void write_json_file(const Json& doc, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "json: cannot open " + path);
    out << doc.dump(2) << "\n";
    require(out.good(), "json: write failed for " + path);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "json: cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const Json::parse_error& e) {
        throw InvalidInput("json: parse error in " + path + ": " + e.what());
    }
    return doc;
}

void reject_unknown_keys(const Json& doc, const std::vector<std::string>& allowed,
                         const std::string& context) {
    require(doc.is_object(), context + ": expected a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw InvalidInput(context + ": unknown key '" + it.key() + "'");
    }
}

}  // namespace arc
