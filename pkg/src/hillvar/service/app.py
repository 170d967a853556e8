"""FastAPI service wrapping the core package."""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import error_bounds, hill_coeffs, majorant_cert, orbit
from ..exactnum import parse_rational, render_tagged
from . import models


def _resolve_lam(m: Fraction, lam_text: str) -> Fraction:
    if lam_text == "m2":
        return m * m
    return parse_rational(lam_text)


def create_app() -> FastAPI:
    app = FastAPI(title="hillvar", version="0.1.0")

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/coeffs", response_model=models.TableResponse)
    def coeffs(req: models.CoeffsRequest):
        table = hill_coeffs.build_table(parse_rational(req.m), req.J)
        return hill_coeffs.table_to_dict(table)

    @app.post(
        "/certify",
        response_model=models.CertificateResponse,
        response_model_exclude_none=True,
    )
    def certify(req: models.CertifyRequest):
        tol = parse_rational(req.tol)
        if req.complex_radius is not None:
            radius = parse_rational(req.complex_radius)
            lam = _resolve_lam(radius, req.lam)
            cert = majorant_cert.complex_disc_certify(radius, lam)
        else:
            if req.m is None:
                raise ValueError("certify requires --m unless a complex radius is given")
            m = parse_rational(req.m)
            params = majorant_cert.reduce_params(m, _resolve_lam(m, req.lam))
            if req.condition == "sufficient":
                cert = majorant_cert.sufficient_check(params)
            elif req.condition == "quadratic":
                _, cert = majorant_cert.quadratic_majorant(params, tol)
            else:
                cert = majorant_cert.exact_condition(params, tol)
        return majorant_cert.certificate_to_dict(cert)

    @app.post("/critical-m", response_model=models.CriticalMResponse)
    def critical_m(req: models.CriticalMRequest):
        bracket = majorant_cert.critical_m(parse_rational(req.tol))
        return {
            "lo": _frac(bracket.lo),
            "hi": _frac(bracket.hi),
            "width": _frac(bracket.width),
            "lo_decimal": render_tagged(bracket.lo, req.digits).text,
            "hi_decimal": render_tagged(bracket.hi, req.digits).text,
        }

    @app.post("/bound", response_model=models.BoundResponse)
    def bound(req: models.BoundRequest):
        m = parse_rational(req.m)
        report = error_bounds.bound_pipeline(
            m,
            lam=_resolve_lam(m, req.lam),
            J=req.J,
            N=req.N,
            n=req.n,
            tol=parse_rational(req.tol),
        )
        return report.to_dict()

    @app.post("/orbit", response_model=models.OrbitResponse)
    def orbit_endpoint(req: models.OrbitRequest):
        m = parse_rational(req.m)
        table = hill_coeffs.build_table(m, req.J)
        n_max = req.J if req.n_max is None else req.n_max
        content = orbit.export_orbit(
            table,
            _resolve_lam(m, req.lam),
            samples=req.samples,
            n_max=n_max,
            fmt=req.format,
            digits=req.digits,
        )
        return {"format": req.format, "samples": req.samples, "content": content}

    @app.post("/report", response_model=models.ReportResponse)
    def report(req: models.ReportRequest):
        rep = error_bounds.reference_report(parse_rational(req.m), req.digits)
        data = rep.to_dict()
        data["text"] = rep.to_text()
        return data

    @app.post("/residual", response_model=models.ResidualResponse)
    def residual(req: models.ResidualRequest):
        m = parse_rational(req.m)
        table = hill_coeffs.build_table(m, req.J)
        res_p, res_q = hill_coeffs.ode_residual(table, req.J)
        ode_through = 0
        for j in range(1, req.J + 1):
            if res_p.grade(j).is_zero() and res_q.grade(j).is_zero():
                ode_through = j
            else:
                break
        defining_through = 0
        for r in range(1, req.J + 1):
            if hill_coeffs.defining_system_residual(table, r).is_zero():
                defining_through = r
            else:
                break
        return {
            "m": _frac(m),
            "J": req.J,
            "ode_zero_through": ode_through,
            "defining_zero_through": defining_through,
            "all_zero": ode_through == req.J and defining_through == req.J,
        }

    return app


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


app = create_app()
