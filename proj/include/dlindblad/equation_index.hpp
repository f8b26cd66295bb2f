#pragma once

// Coverage table: each numbered relation, the code that implements it and
// the GoogleTest ids (Suite.Name, space separated) that check it.

#include <array>
#include <string>
#include <string_view>

namespace dlindblad {

struct EquationEntry {
    int eq;
    std::string_view module;
    std::string_view operation;
    std::string_view tests;
};

inline constexpr int kEquationCount = 57;

inline constexpr std::array<EquationEntry, kEquationCount> kEquationIndex{{
    {1, "fock_ops", "build_operators (A = a f(N) = f(N+1) a)", "FockOps.Eq1BothFactorizationsAgree"},
    {2, "fock_ops", "check_commutators", "FockOps.Eq2CommutatorsExact"},
    {3, "fock_ops", "check_commutators", "FockOps.Eq3Eq5InteriorCommutator"},
    {4, "deformation", "eval_box, eval_f", "Deformation.Eq4BoxZeroAndOne Deformation.Eq4BoxEqualsNTimesFSquared"},
    {5, "fock_ops", "check_commutators", "FockOps.Eq5InteriorMatchesBoxDifferences FockOps.Eq5IdentityBosonCommutator"},
    {6, "deformation", "eval_box (QReal)", "Deformation.Eq6QRealBracketAtTwo Deformation.QRealPositiveForPositiveTau"},
    {7, "fock_ops", "build_operators (QReal)", "FockOps.Eq7QRealMatrixElement"},
    {8, "generator", "DeformedLiouvillian::apply", "Generator.Eq8Eq10Eq11CouplingOracle"},
    {9, "generator", "Hamiltonian term -i omega [N, rho]", "Generator.Eq8Eq10Eq11CouplingOracle"},
    {10, "environment", "from_environment_couplings", "Generator.Eq8Eq10Eq11CouplingOracle"},
    {11, "environment", "from_environment_couplings", "Generator.Eq8Eq10Eq11CouplingOracle"},
    {12, "generator", "DeformedLiouvillian::apply (f = 1)", "Generator.Eq12UndeformedReduction"},
    {13, "environment", "from_diffusion", "Environment.Eq13FromDiffusion Environment.Eq13GeneralD1"},
    {14, "environment", "couplings_unchecked", "Environment.Eq14SingleCouplingSignConvention Environment.Eq14Additivity"},
    {15, "environment", "validate, constraint_margins", "Environment.Eq15AcceptRejectTable"},
    {16, "density_matrix", "DensityMatrix::gibbs", "Generator.Eq16GibbsStateIsStationary Evolve.Eq16RelaxesToGibbs"},
    {17, "environment", "thermal", "Environment.Eq17ThermalCoefficients Environment.Eq17ZeroTemperature"},
    {18, "generator", "DeformedLiouvillian::apply", "Generator.Eq46Eq18EquivalenceAllKinds Generator.HermiticityPreserved"},
    {19, "generator", "DeformedLiouvillian::apply (thermal form)", "Generator.Eq19ThermalFormOracle"},
    {20, "generator", "DeformedLiouvillian::apply (T = 0)", "Generator.Eq20SingleQuantumDecay Generator.Eq20VacuumStationaryUnderDeformation"},
    {21, "moments", "full_moment_rhs (Generic)", "Moments.Eq21UndeformedReduction Evolve.Eq21Eq22MomentConsistencyUndeformed"},
    {22, "moments", "full_moment_rhs (Generic)", "Evolve.Eq21Eq22MomentConsistencyUndeformed"},
    {23, "moments", "full_moment_rhs (QBox)", "Moments.Eq23MatchesEq21ForQBox Evolve.Eq23Eq24MomentConsistencyDeformed"},
    {24, "moments", "full_moment_rhs (QBox)", "Evolve.Eq23Eq24MomentConsistencyDeformed"},
    {25, "deformation", "eval_box_taylor", "Deformation.Eq25TaylorBracketExact Deformation.Eq25TaylorRemainderBound"},
    {26, "moments", "full_moment_rhs (QTaylor)", "Moments.Eq26Eq27TaylorSubstitution"},
    {27, "moments", "full_moment_rhs (QTaylor)", "Moments.Eq26Eq27TaylorSubstitution"},
    {28, "fock_ops", "normal ordering of N^3", "FockOps.Eq28NormalOrderingIdentity"},
    {29, "moments", "truncated_rhs", "Moments.Eq29UndeformedReductions Moments.Eq29Eq30ExactOnThreeLevelSupport"},
    {30, "moments", "truncated_rhs", "Moments.Eq29Eq30ExactOnThreeLevelSupport"},
    {31, "moments", "truncated_rhs (coth = 1)", "Moments.Eq31Eq32Example Moments.Eq31Eq32NumericalIntegrationMatchesClosedForm"},
    {32, "moments", "truncated_rhs (coth = 1)", "Moments.Eq31Eq32Example"},
    {33, "moments", "MomentState", "Moments.Eq34MatrixMatchesTruncatedRhs"},
    {34, "moments", "moment_system_t0", "Moments.Eq34MatrixMatchesTruncatedRhs Moments.Eq34EigenvalueIdentity"},
    {35, "moments", "integrate_truncated", "Moments.Eq31Eq32NumericalIntegrationMatchesClosedForm"},
    {36, "moments", "solve_t0", "Moments.Eq37MatchesEigenPath"},
    {37, "moments", "solve_t0", "Moments.Eq37InitialCondition Moments.Eq37DecayRates Moments.Eq37SatisfiesOde"},
    {38, "moments", "solve_t0", "Moments.Eq38Eq41ExplicitForms"},
    {39, "moments", "solve_t0", "Moments.Eq38Eq41ExplicitForms"},
    {40, "moments", "solve_t0", "Moments.Eq38Eq41ExplicitForms"},
    {41, "moments", "solve_t0", "Moments.Eq38Eq41ExplicitForms"},
    {42, "moments", "solve_t0_leading", "Moments.Eq42Eq43MatchTranscription Moments.Eq42LeadingOrderDeviationIsSmall Moments.Eq42QPhaseReplacement"},
    {43, "moments", "solve_t0_leading", "Moments.Eq42Eq43MatchTranscription Moments.Eq42Eq43InitialValuesExact"},
    {44, "moments", "solve_t0 (tau = 0)", "Moments.Eq44Eq45ZeroDeformationLimit Evolve.Eq44UndeformedDecay"},
    {45, "moments", "solve_t0 (tau = 0)", "Moments.Eq44Eq45ZeroDeformationLimit Moments.Eq44Eq45UndeformedValues"},
    {46, "generator", "DeformedLiouvillian::apply_number_rep", "Generator.Eq46Eq18EquivalenceAllKinds Generator.Eq46GroundStateElement"},
    {47, "populations", "population_rhs", "Generator.Eq47PopulationsDecoupleWhenD1Zero Populations.Eq47MatchesGeneratorDiagonal"},
    {48, "populations", "population_rhs (q-kinds)", "Populations.Eq48QFormMatchesBracket"},
    {49, "populations", "rates", "Populations.Eq49RatesUndeformed"},
    {50, "populations", "rates (q-kinds)", "Populations.Eq50RatesQReal"},
    {51, "populations", "population_rhs, integrate_populations", "Populations.Eq51ConservesProbability Populations.Eq51VacuumAbsorbingAtZeroTemperature"},
    {52, "populations", "steady_ratio, steady_state", "Populations.Eq52SteadyStateIsStationary Populations.Eq52GeometricExamples Populations.Eq52DeformationIndependent"},
    {53, "populations", "detailed_balance_report, detailed_balance_link_residual", "Populations.Eq53DetailedBalance Populations.Eq53LinkResidualDeformationFree"},
    {54, "populations", "boltzmann_distribution", "Populations.Eq54Eq57BoltzmannIdentity"},
    {55, "populations", "infinite_range_p0", "Populations.Eq55GroundStateNormalization"},
    {56, "populations", "partition_function, partition_function_closed", "Populations.Eq56PartitionFunction"},
    {57, "populations", "oscillator_energy, boltzmann_distribution", "Populations.Eq57OscillatorEnergy Populations.Eq54Eq57BoltzmannIdentity"},
}};

inline std::string equation_index_markdown() {
    std::string out;
    out += "# Equation index\n\n";
    out += "Generated by `gen_equation_index`; do not edit by hand.\n\n";
    out += "| Eq. | Module | Operation | Tests |\n";
    out += "|----:|--------|-----------|-------|\n";
    for (const auto& e : kEquationIndex) {
        out += "| " + std::to_string(e.eq) + " | " + std::string(e.module) + " | `" + std::string(e.operation) +
               "` | ";
        std::string_view rest = e.tests;
        bool first = true;
        while (!rest.empty()) {
            const auto sp = rest.find(' ');
            const auto id = rest.substr(0, sp);
            out += (first ? "`" : "<br>`") + std::string(id) + "`";
            first = false;
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
        }
        out += " |\n";
    }
    return out;
}

}  // namespace dlindblad
