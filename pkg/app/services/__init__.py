# Services package

