#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "spf/generate.hpp"
#include "spf/stored.hpp"
#include "verify.hpp"

namespace {

using namespace spf;

constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;

/// Wrong operation for the loaded representation, or a missing argument.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

template <class T, class Fn>
T parse_text(const std::string& text, Fn fn) {
    std::istringstream in(text);
    return fn(in);
}

void print_space(const StoredRep& rep) {
    auto items = rep.space();
    std::printf("%-28s %14s %14s\n", "component", "payload", "index");
    for (const auto& it : items)
        std::printf("%-28s %14llu %14llu\n", it.name.c_str(), static_cast<unsigned long long>(it.bits.payload),
                    static_cast<unsigned long long>(it.bits.index));
    SpaceBits tot = sum(items);
    auto bound = static_cast<long long>(rep.bound_bits());
    auto total = static_cast<long long>(tot.total());
    std::printf("bound       %14lld bits  %s\n", bound, rep.bound_label().c_str());
    std::printf("payload     %14llu bits  (index %llu)\n", static_cast<unsigned long long>(tot.payload),
                static_cast<unsigned long long>(tot.index));
    std::printf("redundancy  %14lld bits  (payload + index - bound)\n", total - bound);
}

void print_summary(const StoredRep& rep) {
    std::printf("representation %s, n = %llu", to_string(rep.kind()).c_str(), static_cast<unsigned long long>(rep.size()));
    if (rep.is_func()) std::printf(", m = %llu", static_cast<unsigned long long>(rep.range()));
    std::printf("\n");
    if (const auto* sc = dynamic_cast<const ShortcutPerm*>(rep.backend()))
        std::printf("shortcut: t = %llu, s = %llu\n", static_cast<unsigned long long>(sc->index().spacing()),
                    static_cast<unsigned long long>(sc->index().shortcut_count()));
    if (const auto* b = dynamic_cast<const BenesRep*>(rep.backend()))
        std::printf("benes: q = %llu, r = %u, n' = %llu\n", static_cast<unsigned long long>(b->q()), b->r(),
                    static_cast<unsigned long long>(b->padded_size()));
    if (const auto* p = rep.powers())
        std::printf("powers: %llu distinct cycle lengths, inner backend %s\n",
                    static_cast<unsigned long long>(p->distinct_lengths()), to_string(p->psi().kind()).c_str());
    const FuncRep* f = rep.func() ? rep.func() : rep.func_large() ? &rep.func_large()->core() : rep.func_small() ? &rep.func_small()->core() : nullptr;
    if (f)
        std::printf("func: %llu gadgets (%llu wide), width %llu, inner backend %s\n",
                    static_cast<unsigned long long>(f->gadget_count()), static_cast<unsigned long long>(f->wide_count()),
                    static_cast<unsigned long long>(f->width()), to_string(f->pi().kind()).c_str());
}

void print_sections(const Container& c) {
    auto bytes = c.serialize();
    std::uint64_t off = 4 + 1 + 8 + 20 * c.sections().size();
    std::printf("container SPFR v%u, %zu bytes\n", unsigned{Container::version}, bytes.size());
    for (const auto& s : c.sections()) {
        std::printf("  section %s offset %llu length %zu\n", s.tag.c_str(), static_cast<unsigned long long>(off), s.bytes.size());
        off += s.bytes.size();
    }
}

struct QueryArgs {
    std::string rep_path;
    std::string op;
    std::int64_t x = 0, k = 0, y = 0;
    bool has_x = false, has_k = false, has_y = false;
    bool count = false;
};

void add_query_options(CLI::App* cmd, QueryArgs& q) {
    cmd->add_option("--rep", q.rep_path, "container file")->required();
    cmd->add_option("--x,--i", q.x, "argument (element, or open-paren position for tree ops)")
        ->each([&q](const std::string&) { q.has_x = true; });
    cmd->add_option("--k", q.k, "power, distance or target excess")->each([&q](const std::string&) { q.has_k = true; });
    cmd->add_option("--y", q.y, "second node for isancestor")->each([&q](const std::string&) { q.has_y = true; });
    cmd->add_flag("--count", q.count, "print evaluation tallies");
}

index_t arg_index(const QueryArgs& q, bool given, std::int64_t v, const char* name) {
    if (!given) throw UsageError(q.op + " needs --" + std::string(name));
    if (v < 0) throw UsageError("--" + std::string(name) + " must be non-negative");
    return static_cast<index_t>(v);
}

std::string show(std::optional<index_t> v) { return v ? std::to_string(*v) : "none"; }

std::string join_sorted(std::vector<index_t> v) {
    std::sort(v.begin(), v.end());
    std::string s;
    for (index_t x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
    return s;
}

std::string tree_query(const BpTree& t, const QueryArgs& q) {
    index_t x = arg_index(q, q.has_x, q.x, "x");
    if (x >= t.length()) throw std::out_of_range("position " + std::to_string(x) + " outside the sequence");
    auto need_open = [&] {
        if (!t.is_open(x)) throw UsageError(q.op + " needs an open-paren position");
    };
    const std::string& op = q.op;
    if (op == "excess") return std::to_string(t.excess(x));
    if (op == "findclose") return need_open(), std::to_string(t.findclose(x));
    if (op == "findopen") {
        if (t.is_open(x)) throw UsageError("findopen needs a close-paren position");
        return std::to_string(t.findopen(x));
    }
    if (op == "nextexcess" || op == "prevexcess") {
        if (!q.has_k) throw UsageError(op + " needs --k");
        return show(op == "nextexcess" ? t.nextexcess(x, q.k) : t.prevexcess(x, q.k));
    }
    need_open();
    if (op == "depth") return std::to_string(t.depth(x));
    if (op == "parent") return show(t.parent(x));
    if (op == "firstchild") return show(t.firstchild(x));
    if (op == "levelancestor") return show(t.levelancestor(x, arg_index(q, q.has_k, q.k, "k")));
    if (op == "levelsuccessor") return show(t.levelsuccessor(x));
    if (op == "levelpredecessor") return show(t.levelpredecessor(x));
    if (op == "subtree_size") return std::to_string(t.subtree_size(x));
    if (op == "preorder") return std::to_string(t.preorder(x));
    if (op == "isancestor") {
        index_t y = arg_index(q, q.has_y, q.y, "y");
        if (y >= t.length() || !t.is_open(y)) throw UsageError("isancestor needs --y at an open-paren position");
        return t.isancestor(x, y) ? "1" : "0";
    }
    throw UsageError("unknown tree operation '" + op + "'");
}

std::string run_query(const StoredRep& rep, const QueryArgs& q, EvalCount* c) {
    const std::string& op = q.op;
    if (op == "forward" || op == "inverse" || op == "power") {
        if (!rep.is_perm()) throw UsageError(op + " needs a permutation representation, container holds " + to_string(rep.kind()));
        index_t x = arg_index(q, q.has_x, q.x, "x");
        if (x >= rep.size()) throw std::out_of_range("x = " + std::to_string(x) + " outside [0, " + std::to_string(rep.size()) + ")");
        if (op == "power") {
            if (!rep.powers()) throw UsageError("power needs a powers container (build powers)");
            if (!q.has_k) throw UsageError("power needs --k");
            return std::to_string(rep.powers()->power(x, q.k, c));
        }
        if (const PermBackend* b = rep.backend()) return std::to_string(op == "forward" ? b->forward(x, c) : b->inverse(x, c));
        return std::to_string(rep.powers()->power(x, op == "forward" ? 1 : -1, c));
    }
    if (op == "fpow" || op == "finv") {
        if (!rep.is_func()) throw UsageError(op + " needs a function representation, container holds " + to_string(rep.kind()));
        index_t i = arg_index(q, q.has_x, q.x, "i");
        index_t k = arg_index(q, q.has_k, q.k, "k");
        index_t dom = op == "fpow" ? rep.size() : rep.range();
        if (i >= dom) throw std::out_of_range("i = " + std::to_string(i) + " outside [0, " + std::to_string(dom) + ")");
        if (op == "fpow") {
            if (const auto* f = rep.func()) return std::to_string(f->power(i, k, c));
            if (const auto* f = rep.func_large()) return std::to_string(f->power(i, k, c));
            return show(rep.func_small()->power(i, k, c));
        }
        if (const auto* f = rep.func()) return join_sorted(f->inverse_power(i, k, c));
        if (const auto* f = rep.func_large()) return join_sorted(f->inverse_power(i, k, c));
        return join_sorted(rep.func_small()->inverse_power(i, k, c));
    }
    if (!rep.tree()) throw UsageError("unknown operation '" + op + "' for a " + to_string(rep.kind()) + " container");
    if (c) ++c->tree_ops;
    return tree_query(*rep.tree(), q);
}

void print_answer(const std::string& answer, const EvalCount* c) {
    std::cout << answer;
    if (c) {
        std::cout << (answer.empty() ? "" : " ") << "evals=" << c->forward_evals + c->inverse_evals;
        std::string extra;
        auto add = [&](const char* name, std::uint64_t v) {
            if (v) extra += std::string(" ") + name + "=" + std::to_string(v);
        };
        add("bit_reads", c->bit_reads);
        add("central_evals", c->central_evals);
        add("dict_ops", c->dict_ops);
        add("tree_ops", c->tree_ops);
        if (!extra.empty()) std::cout << "\ncounters:" << extra;
    }
    std::cout << '\n';
}

StoredRep load_rep(const std::string& path, Container* out = nullptr) {
    Container c = Container::read_file(path);
    StoredRep r = StoredRep::from_container(c);
    if (out) *out = std::move(c);
    return r;
}

struct BenchResult {
    double seconds = 0;
    EvalCount counts;
};

/// Random queries of one kind; arguments drawn up front so timing covers
/// only the queries.
BenchResult bench(const StoredRep& rep, const std::string& op, std::uint64_t queries, std::uint64_t seed, unsigned threads) {
    Rng rng(seed);
    index_t n = rep.size();
    std::vector<QueryArgs> qs(queries);
    std::vector<index_t> opens;
    if (rep.tree() && !rep.is_func())
        for (index_t i = 0; i < rep.tree()->length(); ++i)
            if (rep.tree()->is_open(i)) opens.push_back(i);
    for (auto& q : qs) {
        q.op = op;
        q.has_x = q.has_k = true;
        if (op == "forward" || op == "inverse") {
            q.x = rng.below(n);
        } else if (op == "power") {
            q.x = rng.below(n);
            q.k = rng.between(-2 * static_cast<std::int64_t>(n), 2 * static_cast<std::int64_t>(n));
        } else if (op == "fpow") {
            q.x = rng.below(n);
            q.k = rng.below(2 * n + 1);
        } else if (op == "finv") {
            q.x = rng.below(rep.range());
            q.k = 1 + rng.below(8);
        } else if (!opens.empty()) {
            q.x = opens[rng.below(opens.size())];
            q.k = op == "levelancestor" ? rng.below(rep.tree()->depth(q.x)) : 0;
        } else {
            throw UsageError("bench op '" + op + "' is not supported for a " + to_string(rep.kind()) + " container");
        }
    }
    threads = std::max(1u, threads);
    std::vector<EvalCount> counts(threads);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t i = w; i < queries; i += threads) run_query(rep, qs[i], &counts[w]);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    BenchResult r;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& c : counts) {
        r.counts.forward_evals += c.forward_evals;
        r.counts.inverse_evals += c.inverse_evals;
        r.counts.bit_reads += c.bit_reads;
        r.counts.central_evals += c.central_evals;
        r.counts.dict_ops += c.dict_ops;
        r.counts.tree_ops += c.tree_ops;
    }
    return r;
}

std::string default_bench_op(const StoredRep& rep) {
    if (rep.powers()) return "power";
    if (rep.is_perm()) return "inverse";
    if (rep.is_func()) return "finv";
    return "levelancestor";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Succinct permutations, functions and balanced-parenthesis trees"};
    app.require_subcommand(1);

    // gen
    std::string gen_kind, gen_out, formula;
    index_t gen_n = 0, gen_m = 0;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a seeded instance in text form");
    gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"perm", "func", "tree"}));
    auto* gen_n_opt = gen->add_option("--n", gen_n, "size (elements or tree nodes)");
    gen->add_option("--m", gen_m, "range size for func (default n)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--formula", formula, "closed-form function instead of random")->check(CLI::IsMember({"quad19"}));
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // build
    std::string build_kind, build_in = "-", build_out, backend = "shortcut", flip;
    BuildOptions bopt;
    auto* build = app.add_subcommand("build", "build a representation and write a container");
    build->add_option("kind", build_kind)->required()->check(CLI::IsMember({"naive", "shortcut", "benes", "powers", "tree", "func"}));
    build->add_option("--in", build_in, "input text file ('-' = stdin)");
    build->add_option("--out", build_out, "container file")->required();
    build->add_option("--t", bopt.t, "shortcut spacing / Benes central knob");
    build->add_option("--backend", backend, "inner backend for powers and func")->check(CLI::IsMember({"naive", "shortcut", "benes"}));
    build->add_option("--width", bopt.width, "wide-gadget threshold (0 = default)");
    build->add_flag("--preorder-to-label", bopt.store_preorder_to_label, "store pi^-1 in the func backend");
    build->add_option("--superblock", bopt.tree.superblock);
    build->add_option("--block", bopt.tree.block);
    build->add_option("--delta", bopt.tree.delta);
    build->add_option("--branching", bopt.tree.branching);
    build->add_option("--stride", bopt.tree.stride);
    build->add_option("--flip-switch", flip, "corrupt Benes switch COLUMN,J after routing (testing)");

    // query
    QueryArgs qa;
    auto* query = app.add_subcommand("query", "answer one query from a container");
    query->add_option("op", qa.op, "forward|inverse|power|fpow|finv or a tree operation")->required();
    add_query_options(query, qa);

    // tree query --op
    QueryArgs ta;
    auto* tree = app.add_subcommand("tree", "tree commands");
    auto* tree_query_cmd = tree->add_subcommand("query", "answer one tree query");
    tree->require_subcommand(1);
    tree_query_cmd->add_option("--op", ta.op, "tree operation")->required();
    add_query_options(tree_query_cmd, ta);

    // verify
    std::string vrep, vin;
    std::uint64_t vseed = 1, vsamples = 20000;
    auto* verify = app.add_subcommand("verify", "check a container against brute force on its input");
    verify->add_option("--rep", vrep, "container file")->required();
    verify->add_option("--in", vin, "input text the container was built from")->required();
    verify->add_option("--seed", vseed, "seed for sampled arguments");
    verify->add_option("--samples", vsamples, "sample size for large inputs");

    // bench
    std::string brep, bop;
    std::uint64_t bq = 100000, bseed = 1;
    unsigned bthreads = 1;
    auto* benchc = app.add_subcommand("bench", "time random queries");
    benchc->add_option("--rep", brep, "container file")->required();
    benchc->add_option("--op", bop, "operation (default depends on the container)");
    benchc->add_option("--queries", bq, "number of queries");
    benchc->add_option("--seed", bseed, "seed");
    benchc->add_option("--threads", bthreads, "worker threads (reads only)");

    // space
    std::string srep;
    auto* space = app.add_subcommand("space", "print the space table of a container");
    space->add_option("--rep", srep, "container file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*gen) {
            std::ostringstream out;
            if (gen_kind == "perm") {
                if (!*gen_n_opt || gen_n == 0) throw UsageError("gen perm needs --n >= 1");
                write_perm_text(out, random_perm(gen_n, gen_seed));
            } else if (gen_kind == "func") {
                if (!formula.empty()) {
                    if (*gen_n_opt && gen_n != 19) throw UsageError("quad19 is defined on n = 19");
                    write_func_text(out, quad19(), 19);
                } else {
                    if (!*gen_n_opt || gen_n == 0) throw UsageError("gen func needs --n >= 1");
                    index_t m = gen_m ? gen_m : gen_n;
                    write_func_text(out, random_func(gen_n, m, gen_seed), m);
                }
            } else {
                if (!*gen_n_opt || gen_n == 0) throw UsageError("gen tree needs --n >= 1");
                write_tree_text(out, random_bp(gen_n, gen_seed));
            }
            write_output(gen_out, out.str());
            return 0;
        }
        if (*build) {
            bopt.backend = parse_backend_kind(backend);
            std::string text = read_input(build_in);
            Container c;
            if (!flip.empty() && build_kind != "benes") throw UsageError("--flip-switch applies to benes only");
            if (build_kind == "tree") {
                c = pack_tree(parse_text<std::string>(text, [](std::istream& in) { return read_tree_text(in); }), bopt);
            } else if (build_kind == "func") {
                c = pack_func(parse_text<FuncText>(text, [](std::istream& in) { return read_func_text(in); }), bopt);
            } else {
                auto pi = parse_text<Permutation>(text, [](std::istream& in) { return read_perm_text(in); });
                RepKind kind = build_kind == "naive" ? RepKind::naive
                               : build_kind == "shortcut" ? RepKind::shortcut
                               : build_kind == "benes" ? RepKind::benes
                                                       : RepKind::powers;
                if ((kind == RepKind::shortcut || (kind == RepKind::powers && bopt.backend == BackendKind::shortcut)) && bopt.t < 2)
                    throw UsageError("shortcut spacing needs --t >= 2");
                if (!flip.empty()) {
                    unsigned col = 0;
                    index_t j = 0;
                    char comma = 0;
                    std::istringstream fs(flip);
                    if (!(fs >> col >> comma >> j) || comma != ',') throw UsageError("--flip-switch expects COLUMN,J");
                    BenesRep b(pi, bopt.t);
                    if (col >= 2 * b.r() || j >= b.padded_size() / 2) throw UsageError("--flip-switch outside the network");
                    b.flip_switch(col, j);
                    c = pack_benes(b);
                } else {
                    c = pack_perm(kind, pi, bopt);
                }
            }
            c.write_file(build_out);
            Container back;
            StoredRep rep = load_rep(build_out, &back);
            print_summary(rep);
            print_sections(back);
            print_space(rep);
            return 0;
        }
        if (*query || *tree) {
            QueryArgs& q = *query ? qa : ta;
            StoredRep rep = load_rep(q.rep_path);
            EvalCount c;
            std::string ans = run_query(rep, q, q.count ? &c : nullptr);
            print_answer(ans, q.count ? &c : nullptr);
            return 0;
        }
        if (*verify) {
            StoredRep rep = load_rep(vrep);
            std::string text = read_input(vin);
            cli::Verifier v(vseed, vsamples);
            cli::VerifyReport r;
            if (rep.is_perm())
                r = v.perm(rep, parse_text<Permutation>(text, [](std::istream& in) { return read_perm_text(in); }));
            else if (rep.is_func())
                r = v.func(rep, parse_text<FuncText>(text, [](std::istream& in) { return read_func_text(in); }));
            else
                r = v.tree(*rep.tree(), parse_text<std::string>(text, [](std::istream& in) { return read_tree_text(in); }));
            if (r.witness) {
                std::printf("FAIL %s after %llu checks: %s\n", to_string(rep.kind()).c_str(), static_cast<unsigned long long>(r.checks),
                            r.witness->c_str());
                return exit_mismatch;
            }
            std::printf("PASS %s: %llu checks (%s)\n", to_string(rep.kind()).c_str(), static_cast<unsigned long long>(r.checks),
                        r.exhaustive ? "exhaustive" : "sampled");
            return 0;
        }
        if (*benchc) {
            StoredRep rep = load_rep(brep);
            std::string op = bop.empty() ? default_bench_op(rep) : bop;
            if (bq == 0) throw UsageError("--queries must be positive");
            BenchResult r = bench(rep, op, bq, bseed, bthreads);
            double per = static_cast<double>(bq);
            std::printf("bench %s op=%s queries=%llu threads=%u\n", to_string(rep.kind()).c_str(), op.c_str(),
                        static_cast<unsigned long long>(bq), std::max(1u, bthreads));
            std::printf("ns/query %.1f\n", r.seconds * 1e9 / per);
            std::printf("evals/query %.3f\n", static_cast<double>(r.counts.forward_evals + r.counts.inverse_evals) / per);
            std::printf("bit_reads/query %.3f\n", static_cast<double>(r.counts.bit_reads) / per);
            std::printf("dict_ops/query %.3f\n", static_cast<double>(r.counts.dict_ops) / per);
            std::printf("tree_ops/query %.3f\n", static_cast<double>(r.counts.tree_ops) / per);
            return 0;
        }
        if (*space) {
            Container c;
            StoredRep rep = load_rep(srep, &c);
            print_summary(rep);
            print_sections(c);
            print_space(rep);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
    return exit_usage;
}
