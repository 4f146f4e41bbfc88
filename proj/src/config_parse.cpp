#include "nullwave/config_parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct ParseCtx {
    std::vector<std::string> errors;
    std::string source;

    void fail(int line, const std::string& msg) {
        errors.push_back(source + ":" + std::to_string(line) + ": " + msg);
    }
};

std::optional<double> parse_double(ParseCtx& ctx, int line, const std::string& key,
                                   const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    ctx.fail(line, key + ": expected a number, got '" + v + "'");
    return std::nullopt;
}

std::optional<long long> parse_int(ParseCtx& ctx, int line, const std::string& key,
                                   const std::string& v) {
    try {
        size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    ctx.fail(line, key + ": expected an integer, got '" + v + "'");
    return std::nullopt;
}

std::optional<bool> parse_bool(ParseCtx& ctx, int line, const std::string& key,
                               const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    ctx.fail(line, key + ": expected a boolean, got '" + v + "'");
    return std::nullopt;
}

/// `gaussian center=0 width=1 amplitude=1` and friends.
std::optional<ProfileFn> parse_profile(ParseCtx& ctx, int line, const std::string& key,
                                       const std::string& text) {
    std::vector<std::string> toks = split_ws(text);
    if (toks.empty()) {
        ctx.fail(line, key + ": empty profile");
        return std::nullopt;
    }
    const std::string& kind = toks[0];
    std::map<std::string, double> kv;
    bool ok = true;
    for (size_t i = 1; i < toks.size(); ++i) {
        size_t eq = toks[i].find('=');
        if (eq == std::string::npos) {
            ctx.fail(line, key + ": expected key=value, got '" + toks[i] + "'");
            ok = false;
            continue;
        }
        std::string k = toks[i].substr(0, eq);
        std::optional<double> v = parse_double(ctx, line, key + "." + k, toks[i].substr(eq + 1));
        if (!v) {
            ok = false;
            continue;
        }
        kv[k] = *v;
    }
    if (!ok) return std::nullopt;

    auto take = [&](const char* k, double dflt) {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        double v = it->second;
        kv.erase(it);
        return v;
    };

    std::optional<ProfileFn> out;
    try {
        if (kind == "zero") {
            out = ProfileFn::zero();
        } else if (kind == "gaussian") {
            out = ProfileFn::gaussian(take("center", 0.0), take("width", 1.0),
                                      take("amplitude", 1.0));
        } else if (kind == "bump") {
            out = ProfileFn::compact_bump(take("center", 0.0), take("width", 1.0),
                                          take("amplitude", 1.0));
        } else if (kind == "plateau") {
            out = ProfileFn::plateau(take("level", 1.0), take("half_width", 1.0),
                                     take("taper", 1.0), take("center", 0.0));
        } else {
            ctx.fail(line, key + ": unknown profile kind '" + kind +
                               "' (expected zero, gaussian, bump, or plateau)");
            return std::nullopt;
        }
    } catch (const std::exception& e) {
        ctx.fail(line, key + ": " + e.what());
        return std::nullopt;
    }
    if (!kv.empty()) {
        for (const auto& [k, v] : kv)
            ctx.fail(line, key + ": unknown parameter '" + k + "' for " + kind);
        return std::nullopt;
    }
    return out;
}

struct FieldEntry {
    std::optional<ProfileFn> f, g;
    bool g_minus_f_prime = false;
};

struct TermEntry {
    int i = 0, k = 0, l = 0;
    std::vector<double> values;
    int line = 0;
};

std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_double_list(ParseCtx& ctx, int line, const std::string& key,
                                      const std::string& v) {
    std::vector<double> out;
    for (const std::string& tok : split_ws(v)) {
        std::optional<double> d = parse_double(ctx, line, key, tok);
        if (d) out.push_back(*d);
    }
    return out;
}

} // namespace

ParsedConfig parse_config_text(const std::string& text, const std::string& source_name) {
    ParseCtx ctx;
    ctx.source = source_name;

    ParsedConfig out;
    RunConfig& run = out.run;

    std::map<int, FieldEntry> field_entries;
    std::vector<TermEntry> term_entries;
    std::string frame;
    int frame_line = 0;
    long long fields_explicit = 0;

    std::istringstream is(text);
    std::string raw;
    int line = 0;
    std::string section;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') {
                ctx.fail(line, "malformed section header '" + s + "'");
                section = "?";
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            static const char* known[] = {"grid",       "time",    "weights", "data",
                                          "nonlinearity", "monitors", "output", "study"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                    return section == k;
                }) == std::end(known)) {
                ctx.fail(line, "unknown section [" + section + "]");
                section = "?";
            }
            continue;
        }

        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            ctx.fail(line, "expected key = value, got '" + s + "'");
            continue;
        }
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) {
            ctx.fail(line, "expected key = value, got '" + s + "'");
            continue;
        }
        if (section.empty()) {
            ctx.fail(line, "key '" + key + "' outside of any section");
            continue;
        }
        if (section == "?") continue;  // already reported the bad header

        auto num = [&](double& slot) {
            if (auto v = parse_double(ctx, line, key, val)) slot = *v;
        };
        auto flag = [&](bool& slot) {
            if (auto v = parse_bool(ctx, line, key, val)) slot = *v;
        };

        if (section == "grid") {
            if (key == "x_min") num(run.grid.x_min);
            else if (key == "x_max") num(run.grid.x_max);
            else if (key == "m") {
                if (auto v = parse_int(ctx, line, key, val)) run.grid.m = static_cast<int>(*v);
            } else ctx.fail(line, "unknown key '" + key + "' in [grid]");
        } else if (section == "time") {
            if (key == "t_final") num(run.t_final);
            else if (key == "cadence") num(run.cadence);
            else ctx.fail(line, "unknown key '" + key + "' in [time]");
        } else if (section == "weights") {
            if (key == "delta") num(run.delta);
            else ctx.fail(line, "unknown key '" + key + "' in [weights]");
        } else if (section == "data") {
            if (key == "eps") num(run.eps);
            else if (key == "normalize") flag(run.normalize_data);
            else if (key == "support_tol_rel") num(run.support_tol_rel);
            else if (key == "fields") {
                if (auto v = parse_int(ctx, line, key, val)) fields_explicit = *v;
            } else if (key.rfind("field.", 0) == 0) {
                std::vector<std::string> parts = split_dots(key);
                std::optional<long long> idx;
                if (parts.size() == 3) idx = parse_int(ctx, line, key, parts[1]);
                if (parts.size() != 3 || !idx || *idx < 1 ||
                    (parts[2] != "f" && parts[2] != "g")) {
                    ctx.fail(line, "expected field.<index>.f or field.<index>.g, got '" + key + "'");
                } else {
                    FieldEntry& fe = field_entries[static_cast<int>(*idx)];
                    if (parts[2] == "g" && val == "-f'") {
                        fe.g_minus_f_prime = true;
                    } else if (auto p = parse_profile(ctx, line, key, val)) {
                        if (parts[2] == "f") fe.f = *p;
                        else fe.g = *p;
                    }
                }
            } else ctx.fail(line, "unknown key '" + key + "' in [data]");
        } else if (section == "nonlinearity") {
            if (key == "frame") {
                if (val == "null" || val == "cartesian" || val == "none") {
                    frame = val;
                    frame_line = line;
                } else {
                    ctx.fail(line, "frame: expected null, cartesian, or none, got '" + val + "'");
                }
            } else if (key.rfind("term.", 0) == 0) {
                std::vector<std::string> parts = split_dots(key);
                std::optional<long long> i, k, l;
                if (parts.size() == 4) {
                    i = parse_int(ctx, line, key, parts[1]);
                    k = parse_int(ctx, line, key, parts[2]);
                    l = parse_int(ctx, line, key, parts[3]);
                }
                if (parts.size() != 4 || !i || !k || !l) {
                    ctx.fail(line, "expected term.<i>.<k>.<l>, got '" + key + "'");
                } else {
                    TermEntry te;
                    te.i = static_cast<int>(*i);
                    te.k = static_cast<int>(*k);
                    te.l = static_cast<int>(*l);
                    te.values = parse_double_list(ctx, line, key, val);
                    te.line = line;
                    term_entries.push_back(te);
                }
            } else ctx.fail(line, "unknown key '" + key + "' in [nonlinearity]");
        } else if (section == "monitors") {
            if (key == "ratio_threshold") num(run.monitors.ratio_threshold);
            else if (key == "blowup_factor") num(run.monitors.blowup_factor);
            else if (key == "identity_ubar") {
                if (auto v = parse_double(ctx, line, key, val)) run.monitors.identity_ubar = *v;
            } else ctx.fail(line, "unknown key '" + key + "' in [monitors]");
        } else if (section == "output") {
            if (key == "directory") out.output.directory = val;
            else if (key == "snapshots") flag(out.output.snapshots);
            else if (key == "snapshot_format") {
                if (val == "csv" || val == "binary") out.output.snapshot_format = val;
                else ctx.fail(line, "snapshot_format: expected csv or binary, got '" + val + "'");
            } else ctx.fail(line, "unknown key '" + key + "' in [output]");
        } else if (section == "study") {
            if (key == "grid_sizes") {
                out.study.grid_sizes.clear();
                for (double d : parse_double_list(ctx, line, key, val))
                    out.study.grid_sizes.push_back(static_cast<int>(d));
            } else if (key == "eps_values") {
                out.study.eps_values = parse_double_list(ctx, line, key, val);
            } else if (key == "t_caps") {
                out.study.t_caps = parse_double_list(ctx, line, key, val);
            } else ctx.fail(line, "unknown key '" + key + "' in [study]");
        }
    }

    // Assemble the data fields (1-based, contiguous).
    int max_idx = 0;
    for (const auto& [idx, fe] : field_entries) max_idx = std::max(max_idx, idx);
    if (fields_explicit > 0 && fields_explicit < max_idx)
        ctx.errors.push_back(ctx.source + ": data: fields = " + std::to_string(fields_explicit) +
                             " but field." + std::to_string(max_idx) + ".* entries exist");
    int n_fields = static_cast<int>(std::max<long long>(fields_explicit, max_idx));
    for (int i = 1; i <= max_idx; ++i)
        if (field_entries.find(i) == field_entries.end())
            ctx.errors.push_back(ctx.source + ": data: field indices must be contiguous; field." +
                                 std::to_string(i) + " is missing");
    for (int i = 1; i <= n_fields; ++i) {
        FieldProfile fp;
        auto it = field_entries.find(i);
        if (it != field_entries.end()) {
            fp.f = it->second.f.value_or(ProfileFn::zero());
            fp.g = it->second.g.value_or(ProfileFn::zero());
            fp.g_is_minus_f_prime = it->second.g_minus_f_prime;
            if (fp.g_is_minus_f_prime && it->second.g)
                ctx.errors.push_back(ctx.source + ": data: field." + std::to_string(i) +
                                     ".g given both a profile and -f'");
        } else {
            fp.f = ProfileFn::zero();
            fp.g = ProfileFn::zero();
        }
        run.data.fields.push_back(fp);
    }

    // Assemble the nonlinearity.
    if (!term_entries.empty() && frame.empty())
        ctx.errors.push_back(ctx.source +
                             ": nonlinearity: term entries require an explicit frame");
    if (frame == "none" && !term_entries.empty())
        ctx.fail(frame_line, "frame = none is incompatible with term entries");
    if (n_fields >= 1) {
        NonlinearitySpec spec(n_fields);
        if (frame == "null" || frame == "cartesian") {
            for (const TermEntry& te : term_entries) {
                if (te.i < 1 || te.i > n_fields || te.k < 1 || te.k > n_fields || te.l < 1 ||
                    te.l > n_fields) {
                    ctx.fail(te.line, "term indices must lie in 1.." + std::to_string(n_fields));
                    continue;
                }
                if (frame == "null") {
                    if (te.values.size() != 2) {
                        ctx.fail(te.line, "frame = null terms take 2 values (alpha beta)");
                        continue;
                    }
                    spec.add_null_term(te.i - 1, te.k - 1, te.l - 1, te.values[0], te.values[1]);
                } else {
                    if (te.values.size() != 4) {
                        ctx.fail(te.line,
                                 "frame = cartesian terms take 4 values (tt tx xt xx)");
                        continue;
                    }
                    spec.add_cartesian_term(te.i - 1, te.k - 1, te.l - 1,
                                            QuadraticForm{te.values[0], te.values[1],
                                                          te.values[2], te.values[3]});
                }
            }
        }
        run.spec = std::move(spec);
    }

    if (ctx.errors.empty())
        for (std::string& v : validate(run)) ctx.errors.push_back(ctx.source + ": " + v);
    if (!ctx.errors.empty()) throw ConfigError(std::move(ctx.errors));
    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

} // namespace nullwave
