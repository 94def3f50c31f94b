#include "grum/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "grum/common.hpp"

namespace grum {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.flush()) throw ValidationError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

[[noreturn]] void fail(const fs::path& path, int line_no, const std::string& what) {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

struct CsvRow {
    int line_no;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open: " + path.string());
    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back({line_no, split(line, ',')});
    }
    if (rows.empty()) throw ValidationError(path.string() + ": empty file");
    return rows;
}

double parse_double(const std::string& s, const fs::path& path, int line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty())
        fail(path, line_no, "not a number: '" + s + "'");
    return v;
}

// Shared shape for agents.csv / alternatives.csv: id column plus fixed-width
// numeric attribute columns.
std::pair<std::vector<std::string>, Eigen::MatrixXd> read_attribute_table(
    const fs::path& path, const std::string& id_header, const std::string& attr_prefix) {
    const auto rows = read_csv(path);
    const auto& header = rows.front();
    if (header.fields.empty() || header.fields[0] != id_header)
        fail(path, header.line_no, "header must start with '" + id_header + "'");
    const int width = static_cast<int>(header.fields.size()) - 1;
    for (int c = 0; c < width; ++c) {
        const std::string want = attr_prefix + std::to_string(c + 1);
        if (header.fields[static_cast<std::size_t>(c + 1)] != want)
            fail(path, header.line_no, "expected column '" + want + "'");
    }

    std::vector<std::string> ids;
    Eigen::MatrixXd attrs(static_cast<Eigen::Index>(rows.size()) - 1, width);
    std::map<std::string, int> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.fields.size()) != width + 1)
            fail(path, row.line_no, "expected " + std::to_string(width + 1) + " fields, got " +
                                        std::to_string(row.fields.size()));
        if (row.fields[0].empty()) fail(path, row.line_no, "empty id");
        if (!seen.emplace(row.fields[0], 1).second)
            fail(path, row.line_no, "duplicate id '" + row.fields[0] + "'");
        ids.push_back(row.fields[0]);
        for (int c = 0; c < width; ++c)
            attrs(static_cast<Eigen::Index>(r) - 1, c) =
                parse_double(row.fields[static_cast<std::size_t>(c + 1)], path, row.line_no);
    }
    return {std::move(ids), std::move(attrs)};
}

} // namespace

void write_profile(const Profile& profile, const fs::path& dir) {
    profile.validate();
    fs::create_directories(dir);

    std::ostringstream agents;
    agents << "agent_id";
    for (int c = 0; c < profile.agents.attr_dim(); ++c) agents << ",x" << c + 1;
    agents << "\n";
    for (int i = 0; i < profile.num_agents(); ++i) {
        agents << "u" << i;
        for (int c = 0; c < profile.agents.attr_dim(); ++c)
            agents << ',' << format_double(profile.agents.x(i, c));
        agents << "\n";
    }
    write_text_atomic(dir / "agents.csv", agents.str());

    std::ostringstream alts;
    alts << "alt_id";
    for (int c = 0; c < profile.alternatives.attr_dim(); ++c) alts << ",z" << c + 1;
    alts << "\n";
    for (int j = 0; j < profile.num_alternatives(); ++j) {
        alts << "a" << j;
        for (int c = 0; c < profile.alternatives.attr_dim(); ++c)
            alts << ',' << format_double(profile.alternatives.z(j, c));
        alts << "\n";
    }
    write_text_atomic(dir / "alternatives.csv", alts.str());

    std::ostringstream rankings;
    rankings << "agent_id,ranking\n";
    for (const auto& [agent, ranking] : profile.rankings) {
        rankings << "u" << agent << ',';
        for (std::size_t j = 0; j < ranking.order.size(); ++j)
            rankings << (j ? ">" : "") << 'a' << ranking.order[j];
        rankings << "\n";
    }
    write_text_atomic(dir / "rankings.csv", rankings.str());
}

Profile load_profile(const fs::path& rankings_path, const fs::path& agents_path,
                     const fs::path& alternatives_path) {
    auto [agent_ids, x] = read_attribute_table(agents_path, "agent_id", "x");
    auto [alt_ids, z] = read_attribute_table(alternatives_path, "alt_id", "z");

    std::map<std::string, int> agent_index, alt_index;
    for (std::size_t i = 0; i < agent_ids.size(); ++i)
        agent_index[agent_ids[i]] = static_cast<int>(i);
    for (std::size_t j = 0; j < alt_ids.size(); ++j)
        alt_index[alt_ids[j]] = static_cast<int>(j);

    Profile profile;
    profile.agents.x = std::move(x);
    profile.alternatives.z = std::move(z);
    const int m = profile.num_alternatives();

    const auto rows = read_csv(rankings_path);
    const auto& header = rows.front();
    if (header.fields.size() != 2 || header.fields[0] != "agent_id" ||
        header.fields[1] != "ranking")
        fail(rankings_path, header.line_no, "header must be 'agent_id,ranking'");
    std::vector<char> has_ranking(agent_ids.size(), 0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) fail(rankings_path, row.line_no, "expected 2 fields");
        const auto agent_it = agent_index.find(row.fields[0]);
        if (agent_it == agent_index.end())
            fail(rankings_path, row.line_no, "unknown agent id '" + row.fields[0] + "'");
        if (has_ranking[static_cast<std::size_t>(agent_it->second)])
            fail(rankings_path, row.line_no,
                 "duplicate ranking for agent '" + row.fields[0] + "'");
        has_ranking[static_cast<std::size_t>(agent_it->second)] = 1;

        Ranking ranking;
        for (const auto& token : split(row.fields[1], '>')) {
            const auto alt_it = alt_index.find(token);
            if (alt_it == alt_index.end())
                fail(rankings_path, row.line_no, "unknown alternative id '" + token + "'");
            ranking.order.push_back(alt_it->second);
        }
        if (ranking.size() != m || !ranking.is_permutation())
            fail(rankings_path, row.line_no,
                 "ranking is not a permutation of all " + std::to_string(m) + " alternatives");
        profile.rankings.emplace_back(agent_it->second, std::move(ranking));
    }
    profile.validate();
    return profile;
}

void write_parameters(const Parameters& params, const fs::path& path) {
    params.validate();
    std::ostringstream out;
    out << "param,value\n";
    for (int j = 0; j < params.m(); ++j)
        out << "delta_" << j << ',' << format_double(params.delta[j]) << "\n";
    for (int k = 0; k < params.k_dim(); ++k)
        for (int l = 0; l < params.l_dim(); ++l)
            out << "b_" << k << '_' << l << ',' << format_double(params.b(k, l)) << "\n";
    write_text_atomic(path, out.str());
}

Parameters load_parameters(const fs::path& path) {
    const auto rows = read_csv(path);
    const auto& header = rows.front();
    if (header.fields.size() != 2 || header.fields[0] != "param" ||
        header.fields[1] != "value")
        fail(path, header.line_no, "header must be 'param,value'");

    std::map<int, double> delta;
    std::map<std::pair<int, int>, double> b;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) fail(path, row.line_no, "expected 2 fields");
        const std::string& name = row.fields[0];
        const double value = parse_double(row.fields[1], path, row.line_no);
        int j = 0, k = 0, l = 0;
        if (std::sscanf(name.c_str(), "delta_%d", &j) == 1) {
            if (j < 0 || !delta.emplace(j, value).second)
                fail(path, row.line_no, "bad or repeated '" + name + "'");
        } else if (std::sscanf(name.c_str(), "b_%d_%d", &k, &l) == 2) {
            if (k < 0 || l < 0 || !b.emplace(std::make_pair(k, l), value).second)
                fail(path, row.line_no, "bad or repeated '" + name + "'");
        } else {
            fail(path, row.line_no, "unknown parameter '" + name + "'");
        }
    }

    const int m = static_cast<int>(delta.size());
    Parameters params;
    params.delta.resize(m);
    for (int j = 0; j < m; ++j) {
        const auto it = delta.find(j);
        if (it == delta.end())
            throw ValidationError(path.string() + ": missing delta_" + std::to_string(j));
        params.delta[j] = it->second;
    }
    int k_dim = 0, l_dim = 0;
    for (const auto& [kl, value] : b) {
        k_dim = std::max(k_dim, kl.first + 1);
        l_dim = std::max(l_dim, kl.second + 1);
    }
    params.b.resize(k_dim, l_dim);
    for (int k = 0; k < k_dim; ++k)
        for (int l = 0; l < l_dim; ++l) {
            const auto it = b.find({k, l});
            if (it == b.end())
                throw ValidationError(path.string() + ": missing b_" + std::to_string(k) +
                                      "_" + std::to_string(l));
            params.b(k, l) = it->second;
        }
    params.validate();
    return params;
}

void write_matrix_csv(const Eigen::MatrixXd& matrix, const fs::path& path) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j)
            out << (j ? "," : "") << format_double(matrix(i, j));
        out << "\n";
    }
    write_text_atomic(path, out.str());
}

} // namespace grum
