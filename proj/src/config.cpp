#include "anisostable/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anisostable/errors.hpp"

namespace astab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

} // namespace

ModelParams parse_model_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"d", "alpha", "mu"}, "config");
    if (!doc.contains("d") || !doc.contains("alpha") || !doc.contains("mu"))
        throw ConfigError("config needs keys d, alpha, mu");

    const int d = doc["d"].get<int>();
    const double alpha = doc["alpha"].get<double>();
    const json& mu = doc["mu"];
    if (!mu.is_object()) throw ConfigError("mu must be an object");
    reject_unknown(mu, {"kind", "atoms", "density"}, "mu");
    const std::string kind = mu.value("kind", "");

    SpectralMeasure raw;
    if (kind == "atomic") {
        if (!mu.contains("atoms")) throw ConfigError("atomic mu needs atoms");
        if (mu.contains("density")) throw ConfigError("atomic mu must not carry a density");
        raw.kind = MeasureKind::atomic;
        for (const json& a : mu["atoms"]) {
            reject_unknown(a, {"dir", "w"}, "atom");
            const auto dir = a["dir"].get<std::vector<double>>();
            if (static_cast<int>(dir.size()) != d)
                throw ConfigError("atom direction has wrong dimension");
            Vec v{0, 0, 0};
            for (std::size_t i = 0; i < dir.size(); ++i) v[i] = dir[i];
            raw.atoms.push_back({v, a["w"].get<double>()});
        }
    } else if (kind == "density") {
        if (!mu.contains("density")) throw ConfigError("density mu needs a density table");
        if (mu.contains("atoms")) throw ConfigError("density mu must not carry atoms");
        const json& tab = mu["density"];
        reject_unknown(tab, {"grid_points", "values"}, "density");
        raw.kind = MeasureKind::angular_density;
        raw.density = tab["values"].get<std::vector<double>>();
        if (tab.contains("grid_points") &&
            tab["grid_points"].get<std::size_t>() != raw.density.size())
            throw ConfigError("density grid_points does not match values length");
    } else {
        throw ConfigError("mu.kind must be 'atomic' or 'density'");
    }
    return make_model(d, alpha, raw);
}

ModelParams load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

std::string model_to_json(const ModelParams& m) {
    json doc;
    doc["d"] = m.d;
    doc["alpha"] = m.alpha;
    json mu;
    if (m.mu.kind == MeasureKind::atomic) {
        mu["kind"] = "atomic";
        json atoms = json::array();
        for (const Atom& a : m.mu.atoms) {
            json at;
            at["dir"] = m.d == 2 ? std::vector<double>{a.dir[0], a.dir[1]}
                                 : std::vector<double>{a.dir[0], a.dir[1], a.dir[2]};
            at["w"] = a.weight;
            atoms.push_back(at);
        }
        mu["atoms"] = atoms;
    } else {
        mu["kind"] = "density";
        mu["density"] = {{"grid_points", m.mu.density.size()}, {"values", m.mu.density}};
    }
    doc["mu"] = mu;
    return doc.dump();
}

} // namespace astab
