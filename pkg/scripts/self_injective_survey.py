"""Run the self-injectivity suite on each catalog algebra and print the verdict table."""
from katohull import catalog
from katohull.kato import self_injective_suite

NAMES = ["a2", "dual", "cyclic", "a3r2", "a3", "semisimple"]


def main():
    for name in NAMES:
        rep = self_injective_suite(catalog.by_name(name))
        conds = "  ".join(f"{k}={'y' if c.holds else 'n'}" for k, c in rep.conditions.items())
        print(f"{rep.algebra:<18} self-injective={rep.self_injective!s:<6} consistent={rep.consistent!s:<6} {conds}")
        for k, c in rep.conditions.items():
            if c.witness:
                print(f"    {k}: {c.witness}")


if __name__ == "__main__":
    main()
