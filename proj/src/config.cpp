#include "otfslink/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace otfs {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using Section = std::map<std::string, std::string>;
using Tree = std::map<std::string, Section>;

Tree parse_tree(const std::string& text) {
    Tree tree;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            tree[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!tree[section].emplace(key, value).second)
            throw ConfigError("duplicate key " + section + "." + key);
    }
    return tree;
}

// Tracks which keys were consumed so leftovers can be reported as unknown.
class SectionReader {
public:
    SectionReader(const Tree& tree, const std::string& name) : name_(name) {
        auto it = tree.find(name);
        if (it != tree.end()) section_ = &it->second;
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (!section_) return std::nullopt;
        seen_.insert(key);
        auto it = section_->find(key);
        if (it == section_->end()) return std::nullopt;
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw ConfigError("missing required key " + name_ + "." + key);
        return *v;
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [key, value] : *section_)
            if (!seen_.count(key)) throw ConfigError("unknown key " + name_ + "." + key);
    }

    const std::string& name() const { return name_; }

private:
    std::string name_;
    const Section* section_ = nullptr;
    std::set<std::string> seen_;
};

double to_double(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key " + where + ": '" + v + "' is not a number");
    return x;
}

long long to_int(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key " + where + ": '" + v + "' is not an integer");
    return x;
}

uint64_t to_u64(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key " + where + ": '" + v + "' is not an unsigned integer");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<double> to_double_list(const std::string& where, const std::string& v) {
    std::vector<double> out;
    for (const std::string& item : split_list(v)) out.push_back(to_double(where, item));
    return out;
}

}  // namespace

FileConfig parse_config_text(const std::string& text) {
    const Tree tree = parse_tree(text);
    for (const auto& [name, section] : tree)
        if (name != "frame" && name != "channel" && name != "link" && name != "pilots")
            throw ConfigError("unknown section [" + name + "]");

    FileConfig cfg;

    SectionReader frame(tree, "frame");
    if (!frame.present()) throw ConfigError("missing section [frame]");
    cfg.link.frame.M = static_cast<int>(to_int("frame.M", frame.require("M")));
    cfg.link.frame.N = static_cast<int>(to_int("frame.N", frame.require("N")));
    cfg.link.frame.delta_f_hz = to_double("frame.delta_f_hz", frame.require("delta_f_hz"));
    cfg.link.frame.cp_len = static_cast<int>(to_int("frame.cp_len", frame.require("cp_len")));
    frame.finish();
    cfg.link.frame.validate();

    SectionReader channel(tree, "channel");
    if (!channel.present()) throw ConfigError("missing section [channel]");
    cfg.link.channel.profile = channel.require("profile");
    if (auto v = channel.get("doppler_max_hz"))
        cfg.link.channel.doppler_max_hz = to_double("channel.doppler_max_hz", *v);
    if (auto v = channel.get("doppler_model")) {
        if (*v == "jakes-angle") {
            cfg.link.channel.doppler_model = DopplerModel::JakesAngle;
        } else if (*v == "fixed-per-tap") {
            cfg.link.channel.doppler_model = DopplerModel::FixedPerTap;
        } else {
            throw ConfigError("key channel.doppler_model: expected jakes-angle or fixed-per-tap");
        }
    }
    if (cfg.link.channel.profile == "custom") {
        cfg.link.channel.custom_delays_s =
            to_double_list("channel.tap_delays_s", channel.require("tap_delays_s"));
        cfg.link.channel.custom_powers_db =
            to_double_list("channel.tap_powers_db", channel.require("tap_powers_db"));
    } else {
        if (channel.get("tap_delays_s") || channel.get("tap_powers_db"))
            throw ConfigError("channel.tap_delays_s/tap_powers_db are only valid with profile = custom");
    }
    channel.finish();
    try {
        cfg.link.channel.resolve();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("section [channel]: ") + e.what());
    }

    SectionReader link(tree, "link");
    if (!link.present()) throw ConfigError("missing section [link]");
    const std::string scheme = link.require("scheme");
    if (scheme == "both") {
        cfg.run_both_schemes = true;
        cfg.link.scheme = Scheme::Otfs;
    } else {
        try {
            cfg.link.scheme = scheme_by_name(scheme);
        } catch (const std::exception&) {
            throw ConfigError("key link.scheme: expected otfs, ofdm or both");
        }
    }
    for (const std::string& label : split_list(link.require("mcs"))) {
        try {
            cfg.link.mcs_set.push_back(mcs_by_label(label));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("key link.mcs: ") + e.what());
        }
    }
    cfg.link.codeblock_bits =
        static_cast<int>(to_int("link.codeblock_bits", link.require("codeblock_bits")));
    cfg.link.snr_sweep_db = to_double_list("link.snr_sweep_db", link.require("snr_sweep_db"));
    cfg.link.trials = static_cast<int>(to_int("link.trials", link.require("trials")));
    if (auto v = link.get("mimo")) {
        const auto x = v->find('x');
        if (x == std::string::npos)
            throw ConfigError("key link.mimo: expected TxR, e.g. 2x2");
        cfg.link.tx_streams = static_cast<int>(to_int("link.mimo", trim(v->substr(0, x))));
        cfg.link.rx_streams = static_cast<int>(to_int("link.mimo", trim(v->substr(x + 1))));
    }
    if (auto v = link.get("equalizer")) {
        if (*v != "auto") {
            try {
                cfg.link.equalizer = equalizer_by_name(*v);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("key link.equalizer: ") + e.what());
            }
        }
    }
    if (auto v = link.get("master_seed")) cfg.link.master_seed = to_u64("link.master_seed", *v);
    if (auto v = link.get("workers"))
        cfg.link.workers = static_cast<int>(to_int("link.workers", *v));
    link.finish();

    SectionReader pilots(tree, "pilots");
    if (pilots.present()) {
        PilotSettings ps;
        ps.delay_spread_s = to_double("pilots.delay_spread_s", pilots.require("delay_spread_s"));
        ps.doppler_spread_hz =
            to_double("pilots.doppler_spread_hz", pilots.require("doppler_spread_hz"));
        ps.region_fraction =
            to_double("pilots.region_fraction", pilots.require("region_fraction"));
        if (auto v = pilots.get("pilot_amplitude"))
            ps.pilot_amplitude = to_double("pilots.pilot_amplitude", *v);
        if (auto v = pilots.get("pilot_snr_db"))
            ps.pilot_snr_db = to_double("pilots.pilot_snr_db", *v);
        pilots.finish();
        cfg.pilots = ps;
    }

    try {
        cfg.link.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

FileConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace otfs
