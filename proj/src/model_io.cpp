#include <json.hpp>

#include "wismc/model.hpp"
#include "wismc/util.hpp"

namespace wismc {

using nlohmann::json;

namespace {
constexpr int kFormatVersion = 1;
}

std::string WismcModel::to_json_string() const {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["kind"] = "wismc-model";
    doc["state_space"] = {
        {"labels", space_.labels()},
        {"representative_values", space_.reps()},
    };
    if (return_edges_.empty())
        doc["return_edges"] = nullptr;
    else
        doc["return_edges"] = return_edges_;
    doc["index_levels"] = {{"count", levels_.count()}, {"edges", levels_.edges()}};
    json icfg;
    icfg["lambda"] = index_config_.lambda;
    icfg["memory"] = index_config_.memory ? json(*index_config_.memory) : json(nullptr);
    icfg["initial_index"] = index_config_.initial_index;
    doc["index_config"] = icfg;

    json cells = json::array();
    for (State i = 1; i <= space_.size(); ++i) {
        for (Level v = 1; v <= levels_.count(); ++v) {
            const KernelCell& c = cell(i, v);
            if (!c.populated()) continue;
            json jc;
            jc["state"] = i;
            jc["level"] = v;
            jc["count"] = c.count;
            jc["p"] = c.p;
            json soj = json::array();
            for (std::size_t j = 0; j < c.p.size(); ++j) {
                if (c.p[j] == 0.0) continue;
                json js;
                js["target"] = static_cast<State>(j + 1);
                js["support"] = c.sojourn[j].support();
                if (c.sojourn[j].count_backed())
                    js["counts"] = c.sojourn[j].counts();
                else
                    js["cdf"] = c.sojourn[j].cdf();
                soj.push_back(std::move(js));
            }
            jc["sojourns"] = std::move(soj);
            cells.push_back(std::move(jc));
        }
    }
    doc["cells"] = std::move(cells);
    return doc.dump(2) + "\n";
}

WismcModel WismcModel::from_json_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON parse error: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kFormatVersion)
            throw DataError("unsupported model format_version");
        if (doc.at("kind").get<std::string>() != "wismc-model")
            throw DataError("not a model document");

        const auto& jss = doc.at("state_space");
        StateSpace space(jss.at("representative_values").get<std::vector<double>>(),
                         jss.at("labels").get<std::vector<std::string>>());

        std::vector<double> return_edges;
        if (doc.contains("return_edges") && !doc["return_edges"].is_null())
            return_edges = doc["return_edges"].get<std::vector<double>>();

        const auto& jlv = doc.at("index_levels");
        IndexLevels levels(jlv.at("count").get<int>(),
                           jlv.at("edges").get<std::vector<double>>());

        const auto& jic = doc.at("index_config");
        IndexConfig icfg;
        icfg.lambda = jic.at("lambda").get<double>();
        if (!jic.at("memory").is_null()) icfg.memory = jic.at("memory").get<std::int64_t>();
        icfg.initial_index = jic.at("initial_index").get<double>();

        const std::size_t s = space.reps().size();
        std::vector<KernelCell> cells(s * static_cast<std::size_t>(levels.count()));
        for (const auto& jc : doc.at("cells")) {
            State i = jc.at("state").get<State>();
            Level v = jc.at("level").get<Level>();
            space.require_state(i);
            levels.require_level(v);
            KernelCell cell;
            cell.count = jc.at("count").get<std::int64_t>();
            cell.p = jc.at("p").get<std::vector<double>>();
            if (cell.p.size() != s) throw DataError("cell p row has wrong length");
            cell.sojourn.resize(s);
            for (const auto& js : jc.at("sojourns")) {
                State j = js.at("target").get<State>();
                space.require_state(j);
                auto support = js.at("support").get<std::vector<Minute>>();
                DiscreteCdf cdf;
                if (js.contains("counts"))
                    cdf = DiscreteCdf::from_counts(std::move(support),
                                                   js.at("counts").get<std::vector<std::int64_t>>());
                else
                    cdf = DiscreteCdf::from_cdf(std::move(support),
                                                js.at("cdf").get<std::vector<double>>());
                cell.sojourn[static_cast<std::size_t>(j - 1)] = std::move(cdf);
            }
            const std::size_t idx = static_cast<std::size_t>(i - 1) *
                                        static_cast<std::size_t>(levels.count()) +
                                    static_cast<std::size_t>(v - 1);
            cells[idx] = std::move(cell);
        }
        return WismcModel(std::move(space), std::move(levels), icfg, std::move(cells),
                          std::move(return_edges));
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON structure error: ") + e.what());
    }
}

void WismcModel::save(const std::string& path) const {
    write_file_atomic(path, to_json_string());
}

WismcModel WismcModel::load(const std::string& path) {
    return from_json_string(read_file(path));
}

}  // namespace wismc
