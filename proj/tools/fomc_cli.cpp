#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "fomc/basecase.hpp"
#include "fomc/codegen.hpp"
#include "fomc/evaluator.hpp"
#include "fomc/frontend.hpp"
#include "fomc/oracle.hpp"
#include "fomc/preprocess.hpp"

namespace {

enum Exit { Ok = 0, CompileFailed = 1, Usage = 2, GuardExceeded = 3, TimedOut = 4 };

struct Config {
    std::string file;
    std::vector<std::string> sizes;
    std::string mode = "bfs";
    double timeout = 0;
    bool trace = false;
    bool print_equations = false;
    std::string output;
};

fomc::DomainSizes parse_sizes(const fomc::InstanceAst& ast, const std::vector<std::string>& specs) {
    fomc::DomainSizes sizes = ast.sizes();
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--size", "expected D=n, got '" + spec + "'");
        std::string domain = spec.substr(0, eq);
        bool known = false;
        for (const auto& d : ast.domains) known = known || d.name == domain;
        if (!known) throw CLI::ValidationError("--size", "unknown domain '" + domain + "'");
        try {
            std::size_t used = 0;
            long long n = std::stoll(spec.substr(eq + 1), &used);
            if (used != spec.size() - eq - 1 || n < 0) throw std::invalid_argument(spec);
            sizes[domain] = static_cast<std::uint64_t>(n);
        } catch (const std::logic_error&) {
            throw CLI::ValidationError("--size", "expected a non-negative integer in '" + spec + "'");
        }
    }
    return sizes;
}

fomc::CompileOptions compile_options(const Config& c) {
    fomc::CompileOptions o;
    o.mode = c.mode == "greedy" ? fomc::SearchMode::Greedy : fomc::SearchMode::Bfs;
    if (c.timeout > 0)
        o.deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(c.timeout));
    if (c.trace) o.trace = &std::cerr;
    return o;
}

fomc::Program build(const Config& c, const fomc::InstanceAst& ast) {
    auto instance = fomc::preprocess(ast);
    fomc::CompileStats stats;
    auto program = fomc::compile_with_base_cases(instance, compile_options(c), &stats);
    if (c.trace)
        std::cerr << "non-greedy rules: " << stats.nongreedy << ", search nodes: " << stats.nodes
                  << ", base-case depth: " << stats.max_depth << "\n";
    return program;
}

void print_summary(std::ostream& os, const fomc::Program& p) {
    os << fomc::to_string(p);
    for (const auto& name : p.order) {
        const auto& info = p.function(name);
        os << "\n" << name << "(";
        for (std::size_t i = 0; i < info.params.size(); ++i)
            os << (i ? ", " : "") << info.params[i] << " = |" << info.domains[i] << "|";
        os << ") counts:\n" << fomc::to_string(info.sentence);
    }
}

int run(CLI::App& app, const Config& c, const std::string& command) {
    auto ast = fomc::parse_instance_file(c.file);
    if (command == "oracle") {
        std::cout << fomc::brute_force_wfomc(ast, parse_sizes(ast, c.sizes)).get_str() << "\n";
        return Ok;
    }
    auto sizes = parse_sizes(ast, c.sizes);
    auto program = build(c, ast);
    if (command == "count") {
        std::cout << fomc::evaluate(program, fomc::entry_arguments(program, sizes)).get_str() << "\n";
    } else if (command == "compile") {
        if (c.print_equations) print_summary(std::cout, program);
    } else if (command == "emit") {
        std::string source = fomc::emit_program(program);
        if (c.output.empty() || c.output == "-") {
            std::cout << source;
        } else {
            std::ofstream out(c.output);
            if (!out) throw std::runtime_error("cannot write " + c.output);
            out << source;
        }
    } else {
        std::cerr << app.help();
        return Usage;
    }
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact weighted first-order model counting by compilation"};
    app.require_subcommand(1);
    Config c;
    auto add_common = [&](CLI::App* sub, bool sized) {
        sub->add_option("file", c.file, "Instance file")->required()->check(CLI::ExistingFile);
        if (sized) sub->add_option("--size", c.sizes, "Domain size as D=n (repeatable)");
        sub->add_option("--mode", c.mode, "Search mode")->check(CLI::IsMember({"greedy", "bfs"}));
        sub->add_option("--timeout", c.timeout, "Compilation time limit in seconds")->check(CLI::NonNegativeNumber);
        sub->add_flag("--trace", c.trace, "Print applied rules and base-case recursion to stderr");
    };
    add_common(app.add_subcommand("count", "Compile, evaluate and print the model count"), true);
    auto compile = app.add_subcommand("compile", "Compile to equations");
    add_common(compile, false);
    compile->add_flag("--print-equations", c.print_equations, "Print the equations and function table");
    auto emit = app.add_subcommand("emit", "Write a standalone C++ program");
    add_common(emit, false);
    emit->add_option("-o,--output", c.output, "Output path ('-' for stdout)");
    add_common(app.add_subcommand("oracle", "Brute-force count by enumerating structures"), true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }
    try {
        return run(app, c, app.get_subcommands().front()->get_name());
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const fomc::ParseError& e) {
        std::cerr << c.file << ":" << e.what() << "\n";
        return Usage;
    } catch (const fomc::SortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const fomc::CompilationFailure& e) {
        std::cerr << "compilation failed: " << e.what() << "\n";
        if (!e.stuck_sentence().empty()) std::cerr << "stuck on:\n" << e.stuck_sentence() << "\n";
        return CompileFailed;
    } catch (const fomc::OracleGuardExceeded& e) {
        std::cerr << "oracle: " << e.what() << "\n";
        return GuardExceeded;
    } catch (const fomc::Timeout& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return TimedOut;
    } catch (const fomc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return CompileFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return CompileFailed;
    }
}
