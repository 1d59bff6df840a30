"""Operations package for vortex-cavity.

This package contains configuration, orchestration of pipeline stages,
persistence and display; the physics lives in the domain packages.
"""
