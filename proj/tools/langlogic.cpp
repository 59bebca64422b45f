// langlogic: check language definitions, list derivable assertions, prove goals.

#include <iostream>

#include "CLI11.hpp"
#include "langlogic/cli.hpp"

int main(int argc, char** argv)
{
    using langlogic::CliInvocation;
    using langlogic::OutputFormat;
    using langlogic::Subcommand;

    CLI::App app{"Analyze operational-semantics language definitions (.lan files)"};
    app.require_subcommand(1);

    CliInvocation inv;
    std::string format = "text";
    const std::map<std::string, OutputFormat> formats{{"text", OutputFormat::Text}, {"json", OutputFormat::Json}};

    auto* check = app.add_subcommand("check", "Parse and validate a language definition");
    auto* derive = app.add_subcommand("derive", "List every assertion derivable from the precondition");
    auto* prove = app.add_subcommand("prove", "Prove a goal assertion and print the derivation");

    for (auto* sub : {check, derive, prove}) {
        sub->add_option("file", inv.lang_path, "Language definition (.lan)")->required();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    }
    for (auto* sub : {derive, prove}) {
        sub->add_option("--pre", inv.pre, "Precondition assertion (default: true)");
        sub->add_option("--ineffectual", inv.ineffectual, "Comma-separated ineffectual metavariables");
        sub->add_option("--max-passes", inv.max_passes, "Upper bound on inference passes");
    }
    prove->add_option("--goal", inv.goal, "Goal assertion")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : langlogic::exit_code::kUsage;
    }

    inv.format = formats.at(format);
    if (*check) {
        inv.subcommand = Subcommand::Check;
    } else if (*derive) {
        inv.subcommand = Subcommand::Derive;
    } else {
        inv.subcommand = Subcommand::Prove;
    }
    return langlogic::run(inv, std::cout, std::cerr);
}
