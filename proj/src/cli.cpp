#include "langlogic/cli.hpp"

#include <fstream>
#include <sstream>

#include "langlogic/derivation_json.hpp"
#include "langlogic/lan_format.hpp"
#include "langlogic/prover.hpp"

namespace langlogic {

namespace {

struct Failure {
    int code;
};

std::string read_file(const std::string& path, std::ostream& err)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << path << ": cannot open file\n";
        throw Failure{exit_code::kUsage};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LanguageDef load(const CliInvocation& inv, std::ostream& err, ValidationReport* report_out)
{
    const std::string source = read_file(inv.lang_path, err);
    LanguageDef lang;
    try {
        lang = parse_language_unchecked(source);
    } catch (const ParseError& e) {
        err << inv.lang_path << ":" << e.line() << ":" << e.column() << ": " << e.bare_message() << "\n";
        throw Failure{exit_code::kUsage};
    }
    ValidationReport report = validate_language(lang);
    if (report_out) {
        *report_out = report;
    } else if (!report.ok()) {
        for (const auto& f : report.findings) {
            err << inv.lang_path << ": " << f.kind << ": " << f.message << "\n";
        }
        throw Failure{exit_code::kValidation};
    }
    return lang;
}

Assertion assertion_arg(const std::string& flag, const std::string& text, std::ostream& err)
{
    try {
        Assertion a = parse_assertion(text);
        if (!is_flat(a)) {
            err << flag << ": negation may only wrap an atom\n";
            throw Failure{exit_code::kUsage};
        }
        return a;
    } catch (const AssertionParseError& e) {
        err << flag << ": " << e.what() << "\n";
        throw Failure{exit_code::kUsage};
    }
}

ProverConfig config_of(const CliInvocation& inv, const LanguageDef& lang, std::ostream& err)
{
    ProverConfig cfg;
    if (inv.max_passes) {
        if (*inv.max_passes == 0) {
            err << "--max-passes must be at least 1\n";
            throw Failure{exit_code::kUsage};
        }
        cfg.max_passes = inv.max_passes;
    }
    if (inv.ineffectual) {
        std::set<std::string> mvs;
        const auto declared = declared_metavars(lang);
        std::stringstream ss(*inv.ineffectual);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            if (b == std::string::npos) {
                continue;
            }
            item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
            if (!declared.count(item)) {
                err << "--ineffectual: " << item << " is not a declared metavariable\n";
                throw Failure{exit_code::kUsage};
            }
            mvs.insert(item);
        }
        cfg.ineffectual = std::move(mvs);
    }
    return cfg;
}

int cmd_check(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    ValidationReport report;
    const LanguageDef lang = load(inv, err, &report);
    if (inv.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["ok"] = report.ok();
        j["findings"] = nlohmann::ordered_json::array();
        for (const auto& f : report.findings) {
            j["findings"].push_back({{"kind", f.kind}, {"message", f.message}});
        }
        out << j.dump(2) << "\n";
    } else if (report.ok()) {
        out << inv.lang_path << ": ok (" << lang.grammar.size() << " grammar rules, " << lang.rules.size()
            << " inference rules)\n";
    } else {
        for (const auto& f : report.findings) {
            out << inv.lang_path << ": " << f.kind << ": " << f.message << "\n";
        }
    }
    return report.ok() ? exit_code::kOk : exit_code::kValidation;
}

int cmd_derive(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    const LanguageDef lang = load(inv, err, nullptr);
    const Assertion pre = assertion_arg("--pre", inv.pre, err);
    const Saturation sat = saturate(lang, pre, config_of(inv, lang, err));
    if (inv.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["atoms"] = nlohmann::ordered_json::array();
        for (const auto& a : sat.atoms) {
            j["atoms"].push_back(signed_atom_to_json(a));
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto& a : sat.atoms) {
            out << to_string(a) << "\n";
        }
    }
    return exit_code::kOk;
}

int cmd_prove(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    if (!inv.goal) {
        err << "prove: --goal is required\n";
        return exit_code::kUsage;
    }
    const LanguageDef lang = load(inv, err, nullptr);
    const Assertion pre = assertion_arg("--pre", inv.pre, err);
    const Assertion goal = assertion_arg("--goal", *inv.goal, err);
    const ProofResult result = prove(lang, pre, goal, config_of(inv, lang, err));
    const bool json = inv.format == OutputFormat::Json;
    if (const auto* tree = std::get_if<ProofNode>(&result)) {
        out << (json ? proof_to_json(*tree).dump(2) + "\n" : render_tree(*tree));
        return exit_code::kOk;
    }
    const auto& failure = std::get<FailureReport>(result);
    out << (json ? failure_to_json(failure).dump(2) + "\n" : render_failure(failure));
    return exit_code::kNoProof;
}

}  // namespace

int run(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    try {
        switch (inv.subcommand) {
        case Subcommand::Check:
            return cmd_check(inv, out, err);
        case Subcommand::Derive:
            return cmd_derive(inv, out, err);
        case Subcommand::Prove:
            return cmd_prove(inv, out, err);
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return exit_code::kUsage;
}

}  // namespace langlogic
