// Command-line front end: instance generation, certification, decomposition,
// influence/globalness reports, walk operators, the shadow bound, and the
// check suites.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "efstein/calculus.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/generators.hpp"
#include "efstein/harness.hpp"
#include "efstein/io.hpp"
#include "efstein/measure.hpp"
#include "efstein/operators.hpp"
#include "efstein/version.hpp"
#include "efstein/walks.hpp"

namespace {

using namespace efstein;
using ordered_json = nlohmann::ordered_json;

Subset parse_subset(const std::string& csv) {
    Subset s;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        s = s.with(std::stoi(item));
    }
    return s;
}

ordered_json record_json(const CheckRecord& r) {
    ordered_json j;
    j["check_id"] = r.check_id;
    j["instance"] = r.instance;
    j["lhs"] = r.lhs;
    j["rhs_explicit"] = r.rhs_explicit;
    j["residual"] = r.residual;
    if (r.residual_ratio)
        j["residual_ratio"] = *r.residual_ratio;
    else
        j["residual_ratio"] = nullptr;
    j["status"] = to_string(r.status);
    j["note"] = r.note;
    j["runtime_ms"] = r.runtime_ms;
    return j;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        write_file(out_path, text);
}

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;

    SuiteConfig config() const {
        if (config_path.empty()) return SuiteConfig::defaults();
        return config_from_json(read_file(config_path));
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kLibraryVersion) +
                 " - spectral calculus on weighted partite complexes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--seed", g.seed, "default generator seed");
    app.add_option("--config", g.config_path, "suite config JSON");
    app.add_option("--out", g.out_dir, "output directory for check suites");
    app.add_option("--threads", g.threads, "worker threads");

    // gen ------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a seeded complex (and function)");
    std::string gen_kind = "product", gen_sizes = "3,3,3", gen_spec_path;
    double gen_eta = 0.1, gen_gamma = 0.05, gen_density = 0.5;
    std::string gen_out, fn_kind, fn_out;
    int fn_part = 0, fn_value = 0, fn_degree = 1;
    double fn_p = 0.1;
    std::optional<std::uint64_t> fn_seed;
    gen->add_option("--kind", gen_kind,
                    "product | eta-correlated | perturbed-product | sparse-random");
    gen->add_option("--sizes", gen_sizes, "part sizes, comma separated");
    gen->add_option("--eta", gen_eta, "correlation for eta-correlated");
    gen->add_option("--gamma", gen_gamma, "perturbation scale");
    gen->add_option("--density", gen_density, "support density for sparse-random");
    gen->add_option("--spec", gen_spec_path, "GenSpec JSON (overrides flags)");
    gen->add_option("--out-complex", gen_out, "complex output path");
    gen->add_option("--fn", fn_kind,
                    "optional function: dictator | low-degree | global-set | boolean");
    gen->add_option("--fn-part", fn_part, "dictator coordinate");
    gen->add_option("--fn-value", fn_value, "dictator value index");
    gen->add_option("--fn-degree", fn_degree, "low-degree bound");
    gen->add_option("--fn-p", fn_p, "set density");
    gen->add_option("--fn-seed", fn_seed, "function seed (defaults to --seed)");
    gen->add_option("--fn-out", fn_out, "function output path");

    // certify ---------------------------------------------------------------
    auto* certify = app.add_subcommand("certify", "certify epsilon of a complex");
    std::string cert_in, cert_out;
    std::size_t cert_top = 0;
    certify->add_option("--in", cert_in, "complex JSON")->required();
    certify->add_option("--out", cert_out, "certificate output path");
    certify->add_option("--top", cert_top, "print the n largest witnesses");

    // decompose --------------------------------------------------------------
    auto* dec_cmd = app.add_subcommand("decompose", "Efron-Stein components");
    std::string dec_complex, dec_fn, dec_out;
    dec_cmd->add_option("--complex", dec_complex)->required();
    dec_cmd->add_option("--fn", dec_fn)->required();
    dec_cmd->add_option("--out", dec_out, "family output path");

    // influence ---------------------------------------------------------------
    auto* infl = app.add_subcommand("influence", "influence profile as CSV");
    std::string infl_complex, infl_fn, infl_subset = "0", infl_out;
    int infl_d = 1;
    infl->add_option("--complex", infl_complex)->required();
    infl->add_option("--fn", infl_fn)->required();
    infl->add_option("--subset", infl_subset, "part indices, comma separated");
    infl->add_option("-d,--degree", infl_d, "truncation degree");
    infl->add_option("--out", infl_out);

    // global ---------------------------------------------------------------
    auto* glob = app.add_subcommand("global", "globalness report as JSON");
    std::string glob_complex, glob_fn, glob_out;
    int glob_d = 1;
    glob->add_option("--complex", glob_complex)->required();
    glob->add_option("--fn", glob_fn)->required();
    glob->add_option("-d,--degree", glob_d)->required();
    glob->add_option("--out", glob_out);

    // walk -------------------------------------------------------------------
    auto* walk = app.add_subcommand("walk", "apply a walk operator");
    std::string walk_complex, walk_fn, walk_op = "noise", walk_out;
    double walk_rho = 0.5;
    walk->add_option("--complex", walk_complex)->required();
    walk->add_option("--fn", walk_fn)->required();
    walk->add_option("--op", walk_op, "noise | updown");
    walk->add_option("--rho", walk_rho, "noise rate");
    walk->add_option("--out", walk_out);

    // kk ---------------------------------------------------------------------
    auto* kk = app.add_subcommand("kk", "shadow lower bound check");
    std::string kk_complex, kk_fn, kk_out;
    int kk_d = 1;
    std::optional<double> kk_delta, kk_eps;
    kk->add_option("--complex", kk_complex)->required();
    kk->add_option("--fn", kk_fn)->required();
    kk->add_option("-d,--degree", kk_d);
    kk->add_option("--delta", kk_delta, "globalness bound (default (200 d)^-d)");
    kk->add_option("--eps", kk_eps, "epsilon (default: certify the complex)");
    kk->add_option("--out", kk_out);

    // check ------------------------------------------------------------------
    auto* check = app.add_subcommand("check", "run a named check suite");
    std::string suite;
    check->add_option("suite", suite, "one of: exact-identities, product-oracle, "
                                      "eps-sweep, residual-tracking, applications, default")
        ->required();

    // report -----------------------------------------------------------------
    auto* report = app.add_subcommand("report", "re-emit a JSONL record file");
    std::string rep_in, rep_format = "csv", rep_out;
    report->add_option("--in", rep_in, "records JSONL")->required();
    report->add_option("--format", rep_format, "jsonl | csv | markdown");
    report->add_option("--out", rep_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            GenSpec spec;
            if (!gen_spec_path.empty()) {
                spec = genspec_from_json(read_file(gen_spec_path));
            } else {
                std::stringstream ss(gen_sizes);
                std::string item;
                while (std::getline(ss, item, ',')) spec.sizes.push_back(std::stoi(item));
                spec.eta = gen_eta;
                spec.gamma = gen_gamma;
                spec.density = gen_density;
                spec.seed = g.seed;
                if (gen_kind == "product") spec.kind = GenSpec::Kind::Product;
                else if (gen_kind == "eta-correlated") spec.kind = GenSpec::Kind::EtaCorrelated;
                else if (gen_kind == "perturbed-product")
                    spec.kind = GenSpec::Kind::PerturbedProduct;
                else if (gen_kind == "sparse-random") spec.kind = GenSpec::Kind::SparseRandom;
                else throw Error("unknown --kind '" + gen_kind + "'");
            }
            ComplexPtr mu = generate(spec);
            emit(complex_to_json(*mu), gen_out);
            if (!fn_kind.empty()) {
                FnSpec fs;
                fs.part = fn_part;
                fs.value = fn_value;
                fs.degree = fn_degree;
                fs.p = fn_p;
                fs.seed = fn_seed.value_or(g.seed);
                if (fn_kind == "dictator") fs.kind = FnSpec::Kind::Dictator;
                else if (fn_kind == "low-degree") fs.kind = FnSpec::Kind::RandomLowDegree;
                else if (fn_kind == "global-set") fs.kind = FnSpec::Kind::RandomGlobalSet;
                else if (fn_kind == "boolean") fs.kind = FnSpec::Kind::RandomBoolean;
                else throw Error("unknown --fn '" + fn_kind + "'");
                emit(fn_to_json(gen_function(mu, fs)), fn_out);
            }
        } else if (*certify) {
            ComplexPtr mu = complex_from_json(read_file(cert_in));
            EpsCertificate cert = certify_epsilon(mu, g.threads);
            emit(certificate_to_json(cert), cert_out);
            if (cert_top > 0) {
                for (const EpsWitness* w : cert.top(cert_top)) {
                    std::cerr << "sigma2=" << w->sigma2 << " S=" << w->link_subset.to_string()
                              << " pair=(" << w->part_a << "," << w->part_b << ") x=[";
                    for (std::size_t i = 0; i < w->x.size(); ++i)
                        std::cerr << (i ? "," : "") << w->x[i];
                    std::cerr << "]\n";
                }
            }
        } else if (*dec_cmd) {
            ComplexPtr mu = complex_from_json(read_file(dec_complex));
            Fn f = fn_from_json(read_file(dec_fn), mu);
            emit(family_to_json(es_all(f)), dec_out);
        } else if (*infl) {
            ComplexPtr mu = complex_from_json(read_file(infl_complex));
            Fn f = fn_from_json(read_file(infl_fn), mu);
            InfluenceProfile p = influence_profile(f, parse_subset(infl_subset), infl_d);
            emit(influence_profile_to_csv(p, *mu), infl_out);
        } else if (*glob) {
            ComplexPtr mu = complex_from_json(read_file(glob_complex));
            Fn f = fn_from_json(read_file(glob_fn), mu);
            emit(globalness_to_json(globalness(f, glob_d)), glob_out);
        } else if (*walk) {
            ComplexPtr mu = complex_from_json(read_file(walk_complex));
            Fn f = fn_from_json(read_file(walk_fn), mu);
            Fn result = walk_op == "updown" ? updown(f) : noise_direct(f, walk_rho);
            emit(fn_to_json(result), walk_out);
        } else if (*kk) {
            ComplexPtr mu = complex_from_json(read_file(kk_complex));
            Fn f = fn_from_json(read_file(kk_fn), mu);
            const double delta = kk_delta.value_or(std::pow(200.0 * kk_d, -double(kk_d)));
            const double eps = kk_eps ? *kk_eps : certify_epsilon(mu, g.threads).epsilon;
            ordered_json arr = ordered_json::array();
            for (const CheckRecord& r : check_kk(f, kk_d, delta, eps))
                arr.push_back(record_json(r));
            emit(arr.dump(2), kk_out);
        } else if (*check) {
            SuiteConfig cfg = g.config();
            auto records = run_suite(suite, cfg, g.threads);
            {
                std::ostringstream jsonl, csv;
                write_report(records, ReportFormat::Jsonl, jsonl, &cfg);
                write_report(records, ReportFormat::Csv, csv, &cfg);
                write_file(std::filesystem::path(g.out_dir) / (suite + ".jsonl"),
                           jsonl.str());
                write_file(std::filesystem::path(g.out_dir) / (suite + ".csv"), csv.str());
            }
            int pass = 0, rep = 0, fail = 0;
            for (const auto& r : records) {
                if (r.status == CheckStatus::Pass) ++pass;
                else if (r.status == CheckStatus::Report) ++rep;
                else ++fail;
            }
            std::cout << suite << ": " << records.size() << " records, " << pass
                      << " PASS, " << rep << " REPORT, " << fail << " FAIL\n";
            for (const auto& r : records)
                if (r.status == CheckStatus::Fail)
                    std::cout << "FAIL " << r.check_id << " " << r.instance << " lhs=" << r.lhs
                              << " rhs=" << r.rhs_explicit << "\n";
            return any_fail(records) ? 1 : 0;
        } else if (*report) {
            std::vector<CheckRecord> records;
            std::istringstream in(read_file(rep_in));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                auto j = ordered_json::parse(line);
                if (!j.contains("check_id")) continue;  // header line
                CheckRecord r;
                r.check_id = j["check_id"].get<std::string>();
                r.instance = j["instance"].get<std::string>();
                r.lhs = j["lhs"].get<double>();
                r.rhs_explicit = j["rhs_explicit"].get<double>();
                r.residual = j["residual"].get<double>();
                if (!j["residual_ratio"].is_null())
                    r.residual_ratio = j["residual_ratio"].get<double>();
                const std::string st = j["status"].get<std::string>();
                r.status = st == "PASS" ? CheckStatus::Pass
                           : st == "REPORT" ? CheckStatus::Report
                                            : CheckStatus::Fail;
                r.note = j.value("note", "");
                r.runtime_ms = j.value("runtime_ms", 0.0);
                records.push_back(std::move(r));
            }
            ReportFormat f = rep_format == "jsonl" ? ReportFormat::Jsonl
                             : rep_format == "markdown" ? ReportFormat::Markdown
                                                        : ReportFormat::Csv;
            std::ostringstream out;
            write_report(records, f, out);
            emit(out.str(), rep_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
