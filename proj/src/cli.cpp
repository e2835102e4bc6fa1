#include "symhom/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symhom/deltas.hpp"
#include "symhom/hs.hpp"
#include "symhom/sym_complex.hpp"
#include "symhom/symmetric_reps.hpp"

#ifndef SYMHOM_DATA_DIR
#define SYMHOM_DATA_DIR "data"
#endif

namespace symhom::cli
{

using nlohmann::json;
namespace fs = std::filesystem;

// --------------------------------------------------------------------- cache

ResultCache::ResultCache(fs::path dir)
    : dir_(std::move(dir))
{
}

fs::path ResultCache::path_for(const std::string& key) const { return dir_ / (key + ".json"); }

std::optional<std::string> ResultCache::lookup(const std::string& key, std::ostream& warnings) const
{
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in)
        return std::nullopt;
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    try {
        auto parsed = json::parse(text);
        if (parsed.value("schema", -1) != kSchemaVersion || parsed.value("version", "") != kVersion)
            throw std::runtime_error("stale entry");
        if (!text.empty() && text.back() == '\n')
            text.pop_back();
        return text;
    }
    catch (const std::exception& e) {
        warnings << "warning: ignoring corrupt cache entry " << path_for(key) << " (" << e.what() << ")\n";
        return std::nullopt;
    }
}

void ResultCache::store(const std::string& key, const std::string& report) const
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    auto final_path = path_for(key);
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            return;
        out << report << '\n';
    }
    fs::rename(tmp, final_path, ec);
}

std::string cache_key(const json& job)
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(std::string(kVersion) + "|" + job.dump())));
    return hex;
}

namespace
{

std::string hex_hash(const std::string& text)
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return hex;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json entry_json(const homology::HomologyEntry& e) { return e.to_json(); }

json rational_matrix(const std::vector<std::vector<Rational>>& m)
{
    json rows = json::array();
    for (auto& row : m) {
        json r = json::array();
        for (auto& x : row)
            r.push_back(to_string(x));
        rows.push_back(r);
    }
    return rows;
}

void export_complex(const homology::ChainComplexDesc& C, const std::string& dir, const std::string& stem,
                    std::ostream& err)
{
    fs::create_directories(dir);
    for (int d = C.min_degree() + 1; d <= C.max_degree(); ++d) {
        if (!C.has_boundary(d))
            continue;
        auto path = fs::path(dir) / (stem + "_d" + std::to_string(d) + ".mtx");
        std::ofstream out(path);
        if (!out)
            throw ValidationError("cannot write '" + path.string() + "'");
        out << "% " << C.key() << " over " << C.ring().name() << ", boundary from degree " << d << "\n";
        C.boundary(d)->write_coordinate(out);
        err << "wrote " << path.string() << "\n";
    }
}

RingSpec parse_ring(const std::string& text)
{
    try {
        return RingSpec::parse(text);
    }
    catch (const Error& e) {
        throw ValidationError(e.what());
    }
}

struct Global
{
    int threads = 1;
    std::string cache_dir;
    bool no_cache = false;
    std::string output;
    std::string export_dir;
};

// A command: its canonical parameters (for the cache key) and the computation.
struct Job
{
    std::string command;
    json params = json::object();
    std::string input_text;
    std::function<json()> compute;
    bool cacheable = true;
};

// ------------------------------------------------------------ computations

json sym_homology_by_symmetry(int p)
{
    auto entries = sym::rational_homology_by_symmetry(p);
    json hom = json::array();
    json ranks = json::array();
    for (auto& e : entries)
        hom.push_back(entry_json(e));
    for (int i = 0; i <= p; ++i)
        ranks.push_back(sym::basis_count(p, i));
    return {{"p", p},
            {"ring", "Q"},
            {"chain_ranks", ranks},
            {"homology", hom},
            {"poincare", homology::poincare_polynomial(entries).to_string()},
            {"torsion_free_certified", true}};
}

json sym_homology_result(int p, RingSpec ring, bool basis, const Global& g, std::ostream& err)
{
    auto C = sym::build_complex(p, ring);
    if (!g.export_dir.empty())
        export_complex(C, g.export_dir, "sym" + std::to_string(p), err);
    homology::HomologyOptions options;
    options.basis = basis;
    auto entries = homology::homology_all(C, options);
    json hom = json::array();
    bool torsion_free = true;
    for (auto& e : entries) {
        hom.push_back(entry_json(e));
        torsion_free = torsion_free && e.torsion.empty() && e.certified_torsion_free;
    }
    json ranks = json::array();
    for (int i = 0; i <= p; ++i)
        ranks.push_back(C.rank(i));
    return {{"p", p},
            {"ring", ring.name()},
            {"chain_ranks", ranks},
            {"homology", hom},
            {"poincare", homology::poincare_polynomial(entries).to_string()},
            {"torsion_free_certified", torsion_free}};
}

json sym_rep_result(int p, std::optional<int> degree, reps::TraceMethod method)
{
    json out = {{"p", p}, {"group", "Sigma_" + std::to_string(p + 1)}, {"degrees", json::array()}};
    auto irreps = reps::partitions(p + 1);
    for (int i = degree ? *degree : 0; i <= (degree ? *degree : p); ++i) {
        auto chi = reps::homology_character(p, i, method);
        json mult = json::object();
        for (auto& lambda : irreps) {
            auto m = reps::multiplicity(chi, lambda);
            if (m != 0)
                mult[reps::partition_string(lambda)] = to_string(m);
        }
        out["degrees"].push_back({{"degree", i},
                                  {"dimension", to_string(chi.degree())},
                                  {"character", chi.to_json()},
                                  {"multiplicities", mult}});
    }
    if (!degree || *degree == p)
        out["top_degree_is_induced_cyclic"] = reps::homology_character(p, p, method) == reps::induced_cyclic_character(p);
    return out;
}

json low_json(const hs::LowDegrees& low) { return {{"h0", entry_json(low.h0)}, {"h1", entry_json(low.h1)}}; }

// ------------------------------------------------------------- verification

struct CheckLog
{
    json checks = json::array();
    bool ok = true;

    void add(const std::string& name, bool pass, json details, bool optional = false)
    {
        checks.push_back({{"name", name}, {"pass", pass}, {"optional", optional}, {"details", std::move(details)}});
        if (!optional)
            ok = ok && pass;
    }
};

sym::SymChain corpus_chain(const json& terms, int p, int degree)
{
    auto total = sym::SymChain::zero(p, degree);
    for (auto& t : terms) {
        auto box = t.at("box");
        auto y = sym::b_cycle(box.at(0).get<int>());
        auto z = sym::b_cycle(box.at(1).get<int>());
        auto term = Rational(t.value("coeff", 1))
                    * sym::sigma_act(deltas::Permutation::from_one_line(t.at("perm").get<std::string>()),
                                     sym::box_product(y, z));
        if (term.p != p || term.degree != degree)
            throw ValidationError("relation terms do not live in Sym^(" + std::to_string(p) + ")_"
                                  + std::to_string(degree));
        total += term;
    }
    return total;
}

json verify_corpus(const std::string& corpus_path, int max_p, std::ostream& err)
{
    json corpus;
    try {
        corpus = json::parse(read_file(corpus_path));
    }
    catch (const json::exception& e) {
        throw ValidationError("corpus '" + corpus_path + "' is not valid JSON: " + e.what());
    }
    const fs::path algebra_dir = fs::path(corpus_path).parent_path() / "algebras";
    CheckLog log;

    for (auto& row : corpus.at("poincare")) {
        int p = row.at("p");
        bool optional = row.value("optional", false);
        if (p > max_p)
            continue;
        auto ring = parse_ring(row.at("ring"));
        auto start = std::chrono::steady_clock::now();
        const bool by_symmetry = row.value("ranks", "direct") == "equivariant";
        if (by_symmetry && ring.kind != RingKind::Rationals)
            throw ValidationError("equivariant ranks in the corpus require ring Q");
        auto entries = by_symmetry ? sym::rational_homology_by_symmetry(p)
                                   : homology::homology_all(sym::build_complex(p, ring));
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto got = homology::poincare_polynomial(entries).to_string();
        bool torsion_free = true;
        for (auto& e : entries)
            torsion_free = torsion_free && e.torsion.empty() && e.certified_torsion_free;
        bool pass = got == row.at("expected").get<std::string>() && torsion_free;
        log.add("poincare p=" + std::to_string(p) + " over " + ring.name(), pass,
                {{"expected", row.at("expected")}, {"computed", got}, {"torsion_free_certified", torsion_free},
                 {"seconds", seconds}},
                optional);
        err << (pass ? "ok   " : "FAIL ") << "poincare p=" << p << ": " << got << "\n";
    }

    for (auto& row : corpus.at("hs")) {
        auto A = algebra::Algebra::load((algebra_dir / row.at("algebra").get<std::string>()).string());
        auto ring = parse_ring(row.at("ring"));
        std::optional<int> weight;
        if (row.contains("weight"))
            weight = row.at("weight").get<int>();
        auto r = hs::hs_degree(A, row.at("degree"), ring, weight);
        std::vector<Integer> expected_torsion;
        for (auto& d : row.at("torsion"))
            expected_torsion.emplace_back(d.get<long long>());
        bool pass = r.certified && r.betti == row.at("betti").get<std::size_t>() && r.torsion == expected_torsion;
        std::string name = "hs_degree " + A.name() + " i=" + std::to_string(r.degree)
                           + (weight ? " w=" + std::to_string(*weight) : "") + " over " + ring.name();
        log.add(name, pass, r.to_json());
        err << (pass ? "ok   " : "FAIL ") << name << "\n";
    }

    for (auto& row : corpus.at("hs_low")) {
        auto A = algebra::Algebra::load((algebra_dir / row.at("algebra").get<std::string>()).string());
        auto ring = parse_ring(row.at("ring"));
        auto low = hs::hs_low(A, ring);
        bool pass = low.h0.betti == row.at("h0").get<std::size_t>() && low.h1.betti == row.at("h1").get<std::size_t>()
                    && low.h0.torsion.empty() && low.h1.torsion.empty();
        log.add("hs_low " + A.name() + " over " + ring.name(), pass, low_json(low));
        err << (pass ? "ok   " : "FAIL ") << "hs_low " << A.name() << "\n";
    }

    for (auto& row : corpus.at("relations")) {
        int p = row.at("p");
        int degree = row.at("degree");
        auto lhs = corpus_chain(row.at("lhs"), p, degree);
        auto rhs = corpus_chain(row.at("rhs"), p, degree);
        auto residual = lhs - rhs;
        bool cycle = sym::boundary(residual).is_zero();
        auto d = sym::boundary_matrix(p, degree + 1);
        auto witness = linalg::solve_in_span(d, residual.coordinates(), RingSpec::integers());
        bool pass = cycle && witness.has_value();
        std::string name = "relation in H_" + std::to_string(degree) + "(Sym^(" + std::to_string(p) + ")): "
                           + lhs.to_string() + " = " + rhs.to_string();
        log.add("relation in H_" + std::to_string(degree) + "(Sym^(" + std::to_string(p) + "))", pass,
                {{"residual_is_cycle", cycle}, {"residual_is_boundary_over_Z", witness.has_value()},
                 {"residual", residual.to_string()}});
        err << (pass ? "ok   " : "FAIL ") << name << "\n";
    }
    return {{"corpus", fs::path(corpus_path).filename().string()}, {"checks", log.checks}, {"all_pass", log.ok}};
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ResourceLimitError*>(&e))
        return kResource;
    if (dynamic_cast<const InternalError*>(&e))
        return kInternal;
    if (dynamic_cast<const Error*>(&e))
        return kValidation;
    return kInternal;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Homology of the symmetric complexes Sym^(p) and symmetric homology of algebras", "symhom"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Global g;
    app.add_option("--threads", g.threads, "Worker cap for internal parallel loops")->check(CLI::Range(1, 256));
    app.add_option("--cache-dir", g.cache_dir, "Result cache directory (default: $SYMHOM_CACHE_DIR)");
    app.add_flag("--no-cache", g.no_cache, "Neither read nor write the cache");
    app.add_option("--output,-o", g.output, "Write the JSON report to this file");
    app.add_option("--export-matrices", g.export_dir, "Write boundary matrices in coordinate format to this directory");

    Job job;

    int p = 0, degree = 0;
    std::string ring_text, algebra_path, method = "modular", corpus_path, rank_mode = "direct";
    std::optional<int> weight, m, opt_degree;
    std::size_t max_cells = hs::HsOptions{}.max_cells;
    bool basis = false;
    int epi_m = 0, epi_n = 0, group_n = 0, max_p = 6;

    auto* symh = app.add_subcommand("sym-homology", "Homology of Sym^(p) with Poincare polynomial");
    symh->add_option("--p", p, "p")->required()->check(CLI::Range(0, sym::kMaxP));
    symh->add_option("--ring", ring_text, "Z, Q or F<prime>")->required();
    symh->add_flag("--basis", basis, "Include explicit cycles over Q");
    symh->add_option("--ranks", rank_mode, "direct, or equivariant (Q only, block ranks under (0 1)(2 3)...)")
        ->check(CLI::IsMember({"direct", "equivariant"}));

    auto* symr = app.add_subcommand("sym-rep", "Characters of Sigma_(p+1) on H_*(Sym^(p))");
    symr->add_option("--p", p, "p")->required()->check(CLI::Range(0, 7));
    symr->add_option("--degree", opt_degree, "Single homology degree (default: all)");
    symr->add_option("--method", method, "modular or exact")->check(CLI::IsMember({"modular", "exact"}));

    auto add_algebra = [&](CLI::App* sub) {
        sub->add_option("--algebra", algebra_path, "Algebra JSON file")->required();
        sub->add_option("--ring", ring_text, "Z, Q or F<prime>")->required();
        sub->add_option("--weight", weight, "Restrict to one weight component")->check(CLI::NonNegativeNumber);
    };
    auto* hsd = app.add_subcommand("hs", "HS_i of an algebra from the truncated epi complex");
    add_algebra(hsd);
    hsd->add_option("--degree", degree, "Homology degree i")->required()->check(CLI::Range(0, 8));
    hsd->add_option("--m", m, "Truncation (default floor(3(i+1)/2)+1, echoed in the report)")
        ->check(CLI::NonNegativeNumber);
    hsd->add_option("--max-cells", max_cells, "Resource guard on stored chains");

    auto* hsl = app.add_subcommand("hs-low", "HS_0 and HS_1 from the explicit partial complex");
    add_algebra(hsl);
    auto* hcc = app.add_subcommand("hc-compare", "Comparison map from cyclic to symmetric homology in degrees 0, 1");
    add_algebra(hcc);

    auto* epi = app.add_subcommand("epi-count", "Number of epimorphisms [m] ->> [n] in Delta S");
    epi->add_option("--m", epi_m, "Source")->required()->check(CLI::Range(0, 30));
    epi->add_option("--n", epi_n, "Target")->required()->check(CLI::Range(0, 30));

    auto* grp = app.add_subcommand("group-homology", "H_i of a small symmetric group from the bar complex");
    grp->add_option("--n", group_n, "Sigma_n, 1 <= n <= 4")->required()->check(CLI::Range(1, 4));
    grp->add_option("--degree", degree, "0 <= i <= 3")->required()->check(CLI::Range(0, 3));
    grp->add_option("--ring", ring_text, "Z, Q or F<prime>")->required();

    auto* ver = app.add_subcommand("verify-corpus", "Run the regression corpus of known values");
    ver->add_option("--corpus", corpus_path, "Corpus JSON")->check(CLI::ExistingFile);
    ver->add_option("--max-p", max_p, "Largest p of the Poincare table to recompute")->check(CLI::Range(0, 7));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    }
    catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        set_max_threads(g.threads);
        RingSpec ring;
        if (!ring_text.empty())
            ring = parse_ring(ring_text);

        std::optional<algebra::Algebra> A;
        if (!algebra_path.empty()) {
            job.input_text = read_file(algebra_path);
            A = algebra::Algebra::load(algebra_path);
            job.params["algebra"] = A->name();
            job.params["algebra_hash"] = hex_hash(job.input_text);
        }
        if (!ring_text.empty())
            job.params["ring"] = ring.name();
        if (weight)
            job.params["weight"] = *weight;

        if (symh->parsed()) {
            job.command = "sym-homology";
            job.params["p"] = p;
            job.params["basis"] = basis;
            if (rank_mode == "equivariant") {
                if (ring.kind != RingKind::Rationals)
                    throw ValidationError("--ranks equivariant requires --ring Q");
                if (basis || !g.export_dir.empty())
                    throw ValidationError("--ranks equivariant cannot produce cycles or matrices");
                job.params["ranks"] = rank_mode;
                job.compute = [&] { return sym_homology_by_symmetry(p); };
            }
            else
                job.compute = [&] { return sym_homology_result(p, ring, basis, g, err); };
            job.cacheable = g.export_dir.empty();
        }
        else if (symr->parsed()) {
            job.command = "sym-rep";
            if (opt_degree && (*opt_degree < 0 || *opt_degree > p))
                throw ValidationError("--degree must lie in 0..p");
            job.params["p"] = p;
            job.params["degree"] = opt_degree ? json(*opt_degree) : json(nullptr);
            job.params["method"] = method;
            job.compute = [&] {
                return sym_rep_result(p, opt_degree, method == "exact" ? reps::TraceMethod::Exact
                                                                         : reps::TraceMethod::Modular);
            };
        }
        else if (hsd->parsed()) {
            job.command = "hs";
            hs::HsOptions options;
            options.m = m;
            options.max_cells = max_cells;
            job.params["degree"] = degree;
            job.params["m"] = m ? *m : hs::default_truncation(degree);
            job.params["max_cells"] = max_cells;
            if (!g.export_dir.empty())
                err << "note: hs streams its chains; use hs-low or hc-compare for matrix export\n";
            job.compute = [&, options] { return hs::hs_degree(*A, degree, ring, weight, options).to_json(); };
        }
        else if (hsl->parsed()) {
            job.command = "hs-low";
            job.compute = [&] {
                if (!g.export_dir.empty())
                    export_complex(hs::build_prop3_complex(*A, ring, weight), g.export_dir, "hs_low_" + A->name(), err);
                return low_json(hs::hs_low(*A, ring, weight));
            };
            job.cacheable = g.export_dir.empty();
        }
        else if (hcc->parsed()) {
            job.command = "hc-compare";
            job.compute = [&] {
                if (!g.export_dir.empty()) {
                    export_complex(hs::build_hc_low_complex(*A, ring, weight), g.export_dir, "hc_low_" + A->name(), err);
                    export_complex(hs::build_prop3_complex(*A, ring, weight), g.export_dir, "hs_low_" + A->name(), err);
                }
                auto f = hs::comparison_map(*A, ring, weight);
                return json{{"hc", low_json(hs::hc_low(*A, ring, weight))},
                            {"hs", low_json(hs::hs_low(*A, ring, weight))},
                            {"squares_commute", true},
                            {"on_h0", rational_matrix(f.on_h0)},
                            {"on_h1", rational_matrix(f.on_h1)}};
            };
            job.cacheable = g.export_dir.empty();
        }
        else if (epi->parsed()) {
            job.command = "epi-count";
            job.params["m"] = epi_m;
            job.params["n"] = epi_n;
            job.compute = [&] {
                json r = {{"m", epi_m}, {"n", epi_n}, {"epis", to_string(deltas::epi_count(epi_m, epi_n))},
                          {"morphisms", to_string(deltas::morphism_count(epi_m, epi_n))}};
                if (epi_m <= 5 && epi_n <= 5)
                    r["enumerated"] = deltas::enumerate_epis(epi_m, epi_n).size();
                return r;
            };
        }
        else if (grp->parsed()) {
            job.command = "group-homology";
            job.params["n"] = group_n;
            job.params["degree"] = degree;
            job.compute = [&] { return entry_json(reps::group_homology_small(group_n, degree, ring)); };
        }
        else if (ver->parsed()) {
            job.command = "verify-corpus";
            if (corpus_path.empty())
                corpus_path = std::string(SYMHOM_DATA_DIR) + "/regression.json";
            job.input_text = read_file(corpus_path);
            job.params["corpus_hash"] = hex_hash(job.input_text);
            job.params["max_p"] = max_p;
            job.compute = [&] { return verify_corpus(corpus_path, max_p, err); };
            job.cacheable = false;
        }

        json description = {{"command", job.command}, {"params", job.params}};
        const std::string key = cache_key(description);

        std::optional<ResultCache> cache;
        if (!g.no_cache && job.cacheable) {
            std::string dir = g.cache_dir;
            if (dir.empty())
                if (const char* env = std::getenv("SYMHOM_CACHE_DIR"))
                    dir = env;
            if (!dir.empty())
                cache.emplace(dir);
        }

        std::optional<std::string> text;
        if (cache) {
            text = cache->lookup(key, err);
            if (text)
                err << "served from cache " << cache->path_for(key).string() << "\n";
        }
        int code = kOk;
        if (!text) {
            json report = {{"schema", kSchemaVersion},
                           {"version", kVersion},
                           {"command", job.command},
                           {"params", job.params},
                           {"input_hash", key},
                           {"result", job.compute()}};
            if (job.command == "verify-corpus" && !report["result"]["all_pass"].get<bool>())
                code = kCheckFailed;
            text = report.dump(2);
            if (cache)
                cache->store(key, *text);
        }
        if (!g.output.empty()) {
            std::ofstream file(g.output, std::ios::binary | std::ios::trunc);
            if (!file)
                throw ValidationError("cannot write '" + g.output + "'");
            file << *text << '\n';
        }
        else {
            out << *text << '\n';
        }
        return code;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace symhom::cli
