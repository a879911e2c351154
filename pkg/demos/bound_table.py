"""Print the fewnomial bounds side by side for small n and k."""

from fewnomial.bounds import khovanskii_bound, kr_ledger, new_bound, positive_bound


def main() -> None:
    print(f"{'n':>3} {'k':>3} {'new':>14} {'positive':>12} {'ledger total':>14} {'khovanskii':>14}")
    for n in range(1, 5):
        for k in range(1, 4):
            led = kr_ledger(n, k)
            print(
                f"{n:>3} {k:>3} {float(new_bound(n, k)):>14.4f} {float(positive_bound(n, k)):>12.4f}"
                f" {float(led.total):>14.4f} {khovanskii_bound(n, k):>14.4g}"
            )


if __name__ == "__main__":
    main()
