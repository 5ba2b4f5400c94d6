#include "efstein/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace efstein {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
    }
}

std::string hex_id(std::uint64_t id) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
    return buf;
}

}  // namespace

std::string complex_to_json(const WeightedComplex& mu) {
    ordered_json parts = ordered_json::array();
    for (int i = 0; i < mu.part_count(); ++i) parts.push_back(mu.universe().labels(i));
    ordered_json faces = ordered_json::array();
    ordered_json weights = ordered_json::array();
    for (int z = 0; z < mu.face_count(); ++z) {
        auto f = mu.face(z);
        faces.push_back(std::vector<std::int32_t>(f.begin(), f.end()));
        weights.push_back(mu.weight(z));
    }
    ordered_json j;
    j["parts"] = std::move(parts);
    j["faces"] = std::move(faces);
    j["weights"] = std::move(weights);
    return j.dump(2);
}

ComplexPtr complex_from_json(const std::string& text) {
    ordered_json j = parse(text);
    try {
        std::vector<std::vector<std::string>> parts =
            j.at("parts").get<std::vector<std::vector<std::string>>>();
        std::vector<std::vector<std::int32_t>> faces =
            j.at("faces").get<std::vector<std::vector<std::int32_t>>>();
        std::vector<double> weights = j.at("weights").get<std::vector<double>>();
        return WeightedComplex::create(PartiteUniverse(std::move(parts)), std::move(faces),
                                       std::move(weights), WeightPolicy::Strict);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidMeasure(std::string("bad complex file: ") + e.what());
    }
}

std::string fn_to_json(const Fn& f) {
    ordered_json j;
    j["home"] = f.home().elements();
    j["values"] = std::vector<double>(f.values().begin(), f.values().end());
    j["complex"] = hex_id(f.complex()->id());
    return j.dump(2);
}

Fn fn_from_json(const std::string& text, const ComplexPtr& mu) {
    ordered_json j = parse(text);
    try {
        Subset home;
        for (int i : j.at("home").get<std::vector<int>>()) home = home.with(i);
        std::vector<double> values = j.at("values").get<std::vector<double>>();
        if (j.contains("complex") && j["complex"].get<std::string>() != hex_id(mu->id()))
            throw DomainMismatch("function file names a different complex");
        return Fn(mu, home, std::move(values));
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad function file: ") + e.what());
    }
}

std::string certificate_to_json(const EpsCertificate& cert) {
    ordered_json ws = ordered_json::array();
    for (const auto& w : cert.witnesses) {
        ordered_json e;
        e["S"] = w.link_subset.elements();
        e["x"] = w.x;
        e["pair"] = {w.part_a, w.part_b};
        e["sigma2"] = w.sigma2;
        ws.push_back(std::move(e));
    }
    ordered_json j;
    j["epsilon"] = cert.epsilon;
    j["witness_count"] = cert.witnesses.size();
    j["witnesses"] = std::move(ws);
    return j.dump(2);
}

std::string family_to_json(const EfronSteinFamily& family) {
    ordered_json comps = ordered_json::object();
    for (const auto& [bits, fn] : family.components())
        comps[std::to_string(bits)] =
            std::vector<double>(fn.values().begin(), fn.values().end());
    ordered_json j;
    j["complex"] = hex_id(family.complex_id());
    j["components"] = std::move(comps);
    return j.dump(2);
}

std::string globalness_to_json(const GlobalnessReport& report) {
    ordered_json j;
    j["d"] = report.d;
    j["delta_min"] = report.delta_min;
    j["witness_subset"] = report.witness_subset.elements();
    j["witness_x"] = report.witness_x;
    return j.dump(2);
}

std::string influence_profile_to_csv(const InfluenceProfile& profile,
                                     const WeightedComplex& mu) {
    std::ostringstream out;
    out << "# subset=" << profile.subset.to_string() << " d=" << profile.trunc_degree
        << " mean=" << profile.mean << " mean_sq=" << profile.mean_sq
        << " max=" << profile.max << " mean_trunc=" << profile.mean_trunc
        << " mean_sq_trunc=" << profile.mean_sq_trunc << " max_trunc=" << profile.max_trunc
        << "\n";
    out << "subset,x,influence,influence_trunc\n";
    const Marginal& m = mu.marginal(profile.subset);
    for (int i = 0; i < m.size(); ++i) {
        auto pt = m.point(i);
        std::string x;
        for (std::size_t c = 0; c < pt.size(); ++c) {
            if (c) x += ":";
            x += std::to_string(pt[c]);
        }
        out << profile.subset.bits() << "," << x << "," << profile.influence[i] << ","
            << profile.influence_trunc[i] << "\n";
    }
    return out.str();
}

namespace {

const char* kind_name(GenSpec::Kind k) {
    switch (k) {
        case GenSpec::Kind::Product: return "product";
        case GenSpec::Kind::EtaCorrelated: return "eta-correlated";
        case GenSpec::Kind::PerturbedProduct: return "perturbed-product";
        case GenSpec::Kind::SparseRandom: return "sparse-random";
    }
    return "?";
}

GenSpec::Kind kind_from_name(const std::string& s) {
    if (s == "product") return GenSpec::Kind::Product;
    if (s == "eta-correlated") return GenSpec::Kind::EtaCorrelated;
    if (s == "perturbed-product") return GenSpec::Kind::PerturbedProduct;
    if (s == "sparse-random") return GenSpec::Kind::SparseRandom;
    throw Error("unknown generator kind '" + s + "'");
}

}  // namespace

std::string genspec_to_json(const GenSpec& spec) {
    ordered_json j;
    j["kind"] = kind_name(spec.kind);
    j["sizes"] = spec.sizes;
    j["eta"] = spec.eta;
    j["gamma"] = spec.gamma;
    j["density"] = spec.density;
    j["seed"] = spec.seed;
    return j.dump(2);
}

GenSpec genspec_from_json(const std::string& text) {
    ordered_json j = parse(text);
    GenSpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("sizes")) spec.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("eta")) spec.eta = j["eta"].get<double>();
    if (j.contains("gamma")) spec.gamma = j["gamma"].get<double>();
    if (j.contains("density")) spec.density = j["density"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    return spec;
}

std::string config_to_json(const SuiteConfig& config) {
    ordered_json j;
    j["version"] = config.version;
    j["tol_exact"] = config.tol_exact;
    j["tol_hard"] = config.tol_hard;
    j["ceilings"] = config.ceilings;
    j["eta_grid"] = config.eta_grid;
    j["gamma_grid"] = config.gamma_grid;
    j["rho_grid"] = config.rho_grid;
    j["seeds"] = config.seeds;
    j["max_degree"] = config.max_degree;
    j["sse_rho"] = config.sse_rho;
    j["kk_zeta"] = config.kk_zeta;
    j["negative_delta_ref"] = config.negative_delta_ref;
    j["negative_zeta_ref"] = config.negative_zeta_ref;
    return j.dump(2);
}

SuiteConfig config_from_json(const std::string& text) {
    ordered_json j = parse(text);
    SuiteConfig c = SuiteConfig::defaults();
    try {
        if (j.contains("version")) c.version = j["version"].get<int>();
        if (j.contains("tol_exact")) c.tol_exact = j["tol_exact"].get<double>();
        if (j.contains("tol_hard")) c.tol_hard = j["tol_hard"].get<double>();
        if (j.contains("ceilings"))
            c.ceilings = j["ceilings"].get<std::map<std::string, double>>();
        if (j.contains("eta_grid")) c.eta_grid = j["eta_grid"].get<std::vector<double>>();
        if (j.contains("gamma_grid"))
            c.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
        if (j.contains("rho_grid")) c.rho_grid = j["rho_grid"].get<std::vector<double>>();
        if (j.contains("seeds"))
            c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("max_degree")) c.max_degree = j["max_degree"].get<int>();
        if (j.contains("sse_rho")) c.sse_rho = j["sse_rho"].get<double>();
        if (j.contains("kk_zeta")) c.kk_zeta = j["kk_zeta"].get<double>();
        if (j.contains("negative_delta_ref"))
            c.negative_delta_ref = j["negative_delta_ref"].get<double>();
        if (j.contains("negative_zeta_ref"))
            c.negative_zeta_ref = j["negative_zeta_ref"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad config file: ") + e.what());
    }
    c.validate();
    return c;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace efstein
