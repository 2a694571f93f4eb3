"""Ceiling C2max(d) and its circulant attaining construction for d <= 13."""

from cgp.attainment import MAX_CERTIFIABLE_DIM, certify_attainment, deviant_cosine
from cgp.closed_forms import cgp2_max_bound


def main():
    print(f"{'d':>3} {'C2max':>14} {'cos phi':>9} {'attained':>9}")
    for d in range(2, 17):
        if d <= MAX_CERTIFIABLE_DIM:
            cert = certify_attainment(d)
            status = str(cert.attained)
        else:
            status = "unknown"
        print(f"{d:3d} {cgp2_max_bound(d):14.10f} {deviant_cosine(d):9.4f} {status:>9}")


if __name__ == "__main__":
    main()
