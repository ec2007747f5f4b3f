"""Game-theoretic models of equity-based incentive grants.

Modules:

* ``payoff_core``: cost ledgers, modifiers, stage values and quadrature.
* ``stage_one``: grant negotiation between an employee and shareholders.
* ``stage_two``: quarterly exercise/hedge/effort games with dilution.
* ``coalition``: characteristic functions, core emptiness, Shapley value.
* ``equilibrium``: normal-form games, pure and mixed Nash equilibria.
* ``prodfn``: numerical audit of incentive-augmented production functions.
* ``scenario``, ``runner``, ``cli``: scenario files, runs and reports.
"""

__version__ = "0.1.0"
