"""Command-line front door: a thin client of the HTTP service.

Every command sends one request to the service and formats the response.
Without --server the service runs in-process over an ASGI transport, so the
exit-code contract holds with no separate daemon: 0 = success or certified
pass, 2 = failed certification (or nonzero residual), 1 = usage or runtime
error.  All numeric inputs are parsed as exact rationals.
"""

from __future__ import annotations

import json
import os
import sys

import click
import httpx

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CERT_FAILED = 2


def _post(ctx: click.Context, path: str, payload: dict) -> dict:
    server = ctx.obj.get("server")
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            resp = client.post(path, json=payload)
    else:
        # In-process: drive the ASGI app directly, no daemon required.
        import asyncio

        from .service.app import app

        async def _call() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://hillvar.internal", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        resp = asyncio.run(_call())
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(str(detail))
    return resp.json()


def _emit(text: str, out: str | None) -> None:
    if out:
        tmp = f"{out}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    else:
        click.echo(text, nl=False)


def _as_json(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def _kv_table(data: dict) -> str:
    width = max(len(k) for k in data) + 2
    return "".join(f"{k:<{width}}{v}\n" for k, v in data.items())


_server_option = click.option("--server", default=None, help="Remote service URL (default: in-process).")
_format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json"]), default="table"
)
_table_format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table"
)
_out_option = click.option("--out", default=None, type=click.Path(dir_okay=False))


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Exact computation and convergence certification of the variational orbit."""
    ctx.ensure_object(dict)


def _register_server(ctx: click.Context, server: str | None) -> None:
    ctx.obj["server"] = server


@cli.command()
@click.option("--m", "m", required=True, help="Mean-motion ratio (rational or decimal).")
@click.option("--J", "J", default=8, show_default=True)
@_table_format_option
@_out_option
@_server_option
@click.pass_context
def coeffs(ctx, m, J, fmt, out, server):
    """Build the exact coefficient table through order J."""
    _register_server(ctx, server)
    data = _post(ctx, "/coeffs", {"m": m, "J": J})
    if fmt == "json":
        _emit(_as_json(data), out)
    elif fmt == "csv":
        lines = ["j,sigma,value"]
        lines += [f"{e['j']},{e['sigma']},{e['value']}" for e in data["entries"]]
        _emit("\n".join(lines) + "\n", out)
    else:
        lines = [f"m = {data['m']}   J = {data['J']}"]
        lines += [
            f"  a[{e['j']}][{e['sigma']:>3}] = {e['value']}" for e in data["entries"]
        ]
        _emit("\n".join(lines) + "\n", out)


@cli.command()
@click.option("--m", "m", default=None, help="Mean-motion ratio (rational or decimal).")
@click.option("--lambda", "lam", default="m2", show_default=True, help='Grading weight, or "m2".')
@click.option("--condition", type=click.Choice(["exact", "sufficient", "quadratic"]), default="exact", show_default=True)
@click.option("--complex-radius", "complex_radius", default=None, help="Certify a whole complex disc |m| <= M.")
@click.option("--tol", default="1e-12", show_default=True)
@_format_option
@_out_option
@_server_option
@click.pass_context
def certify(ctx, m, lam, condition, complex_radius, tol, fmt, out, server):
    """Run a convergence certification; exit 2 when it fails."""
    _register_server(ctx, server)
    if m is None and complex_radius is None:
        raise click.ClickException("certify requires --m or --complex-radius")
    payload = {"lambda": lam, "condition": condition, "tol": tol}
    if m is not None:
        payload["m"] = m
    if complex_radius is not None:
        payload["complex_radius"] = complex_radius
    data = _post(ctx, "/certify", payload)
    _emit(_as_json(data) if fmt == "json" else _kv_table(data), out)
    if data["verdict"] != "pass":
        ctx.exit(EXIT_CERT_FAILED)


@cli.command(name="critical-m")
@click.option("--tol", default="1e-4", show_default=True)
@click.option("--digits", default=10, show_default=True)
@_format_option
@_out_option
@_server_option
@click.pass_context
def critical_m(ctx, tol, digits, fmt, out, server):
    """Bracket the largest certified mean-motion ratio (grading weight m^2)."""
    _register_server(ctx, server)
    data = _post(ctx, "/critical-m", {"tol": tol, "digits": digits})
    _emit(_as_json(data) if fmt == "json" else _kv_table(data), out)


@cli.command()
@click.option("--m", "m", required=True)
@click.option("--lambda", "lam", default="m2", show_default=True)
@click.option("--J", "J", default=8, show_default=True)
@click.option("--N", "N", default=2, show_default=True, help="Exact-magnitude threshold order (>= 2).")
@click.option("--n", "n", default=2, show_default=True, help="Truncation order being bounded.")
@click.option("--tol", default="1e-12", show_default=True)
@click.option("--digits", default=10, show_default=True)
@_format_option
@_out_option
@_server_option
@click.pass_context
def bound(ctx, m, lam, J, N, n, tol, digits, fmt, out, server):
    """Rigorous truncation-error bound for the deviation series."""
    _register_server(ctx, server)
    data = _post(
        ctx,
        "/bound",
        {"m": m, "lambda": lam, "J": J, "N": N, "n": n, "tol": tol, "digits": digits},
    )
    if fmt == "json":
        _emit(_as_json(data), out)
    else:
        flat = {
            "N": data["N"],
            "n": data["n"],
            "z": f"[{data['z_lo']}, {data['z_hi']}]",
            "bound": f"[{data['bound_lo']}, {data['bound_hi']}]",
        }
        for i, term in enumerate(data["l_terms"], start=1):
            flat[f"l{i}*lam^{i}"] = term
        for i, r in enumerate(data["rendered"]):
            flat[f"rendered[{i}]"] = f"{r['text']}({r['tag']})"
        _emit(_kv_table(flat), out)


@cli.command()
@click.option("--m", "m", required=True)
@click.option("--lambda", "lam", default="m2", show_default=True)
@click.option("--J", "J", default=8, show_default=True)
@click.option("--n", "n_max", default=None, type=int, help="Series truncation used in evaluation (default J).")
@click.option("--samples", default=16, show_default=True)
@click.option("--digits", default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@_out_option
@_server_option
@click.pass_context
def orbit(ctx, m, lam, J, n_max, samples, digits, fmt, out, server):
    """Sample the planar orbit and export it as CSV or JSON."""
    _register_server(ctx, server)
    payload = {
        "m": m,
        "lambda": lam,
        "J": J,
        "samples": samples,
        "digits": digits,
        "format": fmt,
    }
    if n_max is not None:
        payload["n_max"] = n_max
    data = _post(ctx, "/orbit", payload)
    _emit(data["content"], out)


@cli.command()
@click.option("--m", "m", required=True)
@click.option("--digits", default=10, show_default=True)
@_format_option
@_out_option
@_server_option
@click.pass_context
def report(ctx, m, digits, fmt, out, server):
    """Full replication record of the classical application."""
    _register_server(ctx, server)
    data = _post(ctx, "/report", {"m": m, "digits": digits})
    if fmt == "json":
        data.pop("text", None)
        _emit(_as_json(data), out)
    else:
        _emit(data["text"], out)


@cli.command()
@click.option("--m", "m", required=True)
@click.option("--J", "J", default=8, show_default=True)
@_format_option
@_out_option
@_server_option
@click.pass_context
def residual(ctx, m, J, fmt, out, server):
    """Verify the table solves its defining equations exactly; exit 2 if not."""
    _register_server(ctx, server)
    data = _post(ctx, "/residual", {"m": m, "J": J})
    _emit(_as_json(data) if fmt == "json" else _kv_table(data), out)
    if not data["all_zero"]:
        ctx.exit(EXIT_CERT_FAILED)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("hillvar.service.app:app", host=host, port=port)


def main() -> int:
    try:
        rv = cli.main(args=sys.argv[1:], standalone_mode=False, obj={})
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
